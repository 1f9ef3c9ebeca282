#pragma once

#include "funnel/phys_config.hpp"

namespace funnel {

// Smallest admissible cylindrical radius; the potential has a pole on the axis.
inline constexpr double kRhoMin = 1e-9;

// Cylindrical point. phi is only used where a Cartesian frame is needed.
struct CylPoint {
  double rho = 0.0;
  double z = 0.0;
  double phi = 0.0;
};

// Gradient of U in the cylindrical basis (e_rho, e_z); the e_phi part is zero.
struct GradU {
  double rho = 0.0;
  double z = 0.0;
};

// Nonzero in-plane third derivatives of U in the Cartesian lab frame.
// Every third derivative involving z vanishes identically.
struct ThirdDerivs {
  double uxxx = 0.0;
  double uyyy = 0.0;
  double uxyy = 0.0;
  double uxxy = 0.0;
};

// Throws DomainError when p.rho < kRhoMin or p.rho is not finite.
void require_rho(double rho, const char* where);

// U = hbar^2/(8 m sigma^4) (rho^2 + z^2 - 4 sigma^4 / rho^2).
double potential_u(const CylPoint& p, const PhysConfig& cfg);

// grad U = hbar^2/(4 m sigma^4) [rho (1 + 4 sigma^4/rho^4) e_rho + z e_z].
GradU grad_u(const CylPoint& p, const PhysConfig& cfg);

// Cartesian in-plane third derivatives at lab angle p.phi.
ThirdDerivs third_derivs_u(const CylPoint& p, const PhysConfig& cfg);

// Q = hbar^2/(4 m sigma^2) (3 - (rho^2 + z^2)/(2 sigma^2)). Regular everywhere.
double quantum_potential_q(const CylPoint& p, const PhysConfig& cfg);

// (m/2)(hbar/(m rho))^2 + U + Q - E; identically zero.
double hj_residual(const CylPoint& p, const PhysConfig& cfg);

}  // namespace funnel
