#include "funnel/phys_config.hpp"

#include <cmath>
#include <string>

#include "funnel/errors.hpp"

namespace funnel {

namespace {

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw ConfigError(std::string("PhysConfig: ") + name + " must be finite and positive, got " +
                      std::to_string(v));
  }
}

}  // namespace

PhysConfig::PhysConfig(double hbar, double mass, double sigma_r)
    : hbar_(hbar), mass_(mass), sigma_r_(sigma_r) {
  require_positive(hbar, "hbar");
  require_positive(mass, "mass");
  require_positive(sigma_r, "sigma_r");
}

PhysConfig PhysConfig::with_bohr_radius(double r0) const {
  require_positive(r0, "bohr_radius");
  PhysConfig c = *this;
  c.bohr_radius_ = r0;
  return c;
}

PhysConfig reduced_defaults() { return PhysConfig(1.0, 1.0, 1.0); }

double energy(const PhysConfig& cfg) {
  const double h = cfg.hbar();
  const double s = cfg.sigma_r();
  return 3.0 * h * h / (4.0 * cfg.mass() * s * s);
}

PhysConfig bohr_scenario() {
  const PhysConfig c = reduced_defaults();
  return c.with_bohr_radius(c.sigma_r() * std::sqrt(2.0 / 3.0));
}

}  // namespace funnel
