#include "funnel/analytic_state.hpp"

#include <cmath>
#include <numbers>

namespace funnel {

double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(a, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r -= two_pi;
  return r;
}

double density_f1(const CylPoint& p, const PhysConfig& cfg) {
  const double s = cfg.sigma_r();
  const double r2 = p.rho * p.rho + p.z * p.z;
  return std::pow(2.0 * std::numbers::pi, -1.5) / (s * s * s) * std::exp(-r2 / (2.0 * s * s));
}

Velocity velocity_field(const CylPoint& p, const PhysConfig& cfg) {
  require_rho(p.rho, "velocity_field");
  return {0.0, cfg.hbar() / (cfg.mass() * p.rho), 0.0};
}

WaveValue wavefunction(const CylPoint& p, double t, const PhysConfig& cfg) {
  const double s = cfg.sigma_r();
  const double r2 = p.rho * p.rho + p.z * p.z;
  WaveValue v;
  v.magnitude = std::pow(2.0 * std::numbers::pi, -0.75) * std::pow(s, -1.5) *
                std::exp(-r2 / (4.0 * s * s));
  v.phase = wrap_angle(p.phi - energy(cfg) * t / cfg.hbar());
  return v;
}

StateEval evaluate_state(const CylPoint& p, double t, const PhysConfig& cfg) {
  const WaveValue psi = wavefunction(p, t, cfg);
  return {density_f1(p, cfg), velocity_field(p, cfg).v_phi, psi.magnitude, psi.phase};
}

}  // namespace funnel
