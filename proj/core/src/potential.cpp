#include "funnel/potential.hpp"

#include <cmath>
#include <string>

#include "funnel/errors.hpp"

namespace funnel {

void require_rho(double rho, const char* where) {
  if (!std::isfinite(rho) || rho < kRhoMin) {
    throw DomainError(std::string(where) + ": rho = " + std::to_string(rho) +
                      " is below rho_min (pole on the symmetry axis)");
  }
}

double potential_u(const CylPoint& p, const PhysConfig& cfg) {
  require_rho(p.rho, "potential_u");
  const double h = cfg.hbar();
  const double s2 = cfg.sigma_r() * cfg.sigma_r();
  const double c = h * h / (8.0 * cfg.mass() * s2 * s2);
  return c * (p.rho * p.rho + p.z * p.z - 4.0 * s2 * s2 / (p.rho * p.rho));
}

GradU grad_u(const CylPoint& p, const PhysConfig& cfg) {
  require_rho(p.rho, "grad_u");
  const double h = cfg.hbar();
  const double s2 = cfg.sigma_r() * cfg.sigma_r();
  const double c = h * h / (4.0 * cfg.mass() * s2 * s2);
  const double r4 = p.rho * p.rho * p.rho * p.rho;
  return {c * p.rho * (1.0 + 4.0 * s2 * s2 / r4), c * p.z};
}

ThirdDerivs third_derivs_u(const CylPoint& p, const PhysConfig& cfg) {
  require_rho(p.rho, "third_derivs_u");
  const double h = cfg.hbar();
  const double r5 = std::pow(p.rho, 5);
  const double c = h * h / (cfg.mass() * r5);
  const double cp = std::cos(p.phi);
  const double sp = std::sin(p.phi);
  const double c2 = std::cos(2.0 * p.phi);
  ThirdDerivs d;
  d.uxxx = 12.0 * c * c2 * cp;
  d.uyyy = -12.0 * c * sp * c2;
  d.uxyy = -4.0 * c * cp * (3.0 * c2 - 2.0);
  d.uxxy = 4.0 * c * sp * (3.0 * c2 + 2.0);
  return d;
}

double quantum_potential_q(const CylPoint& p, const PhysConfig& cfg) {
  const double h = cfg.hbar();
  const double s2 = cfg.sigma_r() * cfg.sigma_r();
  return h * h / (4.0 * cfg.mass() * s2) * (3.0 - (p.rho * p.rho + p.z * p.z) / (2.0 * s2));
}

double hj_residual(const CylPoint& p, const PhysConfig& cfg) {
  require_rho(p.rho, "hj_residual");
  const double v = cfg.hbar() / (cfg.mass() * p.rho);
  return 0.5 * cfg.mass() * v * v + potential_u(p, cfg) + quantum_potential_q(p, cfg) - energy(cfg);
}

}  // namespace funnel
