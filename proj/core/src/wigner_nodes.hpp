#pragma once

// Node layout of the separation-space double integral shared by the pointwise
// Wigner evaluator and the momentum-grid sums. Internal to the library.

#include <cmath>
#include <complex>
#include <vector>

#include "funnel/phys_config.hpp"
#include "funnel/quadrature.hpp"
#include "funnel/wigner.hpp"

namespace funnel::detail {

// Angular rule with cached cos/sin of the nodes.
struct AngularTable {
  std::vector<double> c;
  std::vector<double> s;
  std::vector<double> w;
};

// Thread-local cache keyed by (n, stages).
const AngularTable& angular_table(int n, int stages);

struct RadialNode {
  double u = 0.0;       // u = rho * rho_bar / sigma_r
  double w = 0.0;       // radial weight including e^{-u^2/2} u
  double rho_bar = 0.0;
  int n_phi = 0;
  int stages = 0;       // sine-map stages of the angular rule
};

struct Layout {
  std::vector<RadialNode> radial;
  std::size_t terms() const;
};

// Radial nodes on [0, u_hi], split and graded at the vortex radius u* = rho/sigma_r
// when u* < u_hi. Counts: lambda * max(base, 2 * resolution(|p|)) per direction.
Layout build_layout(double rho, double p_abs, double u_hi, int n_phi_base, int n_rho_base,
                    double lambda, const PhysConfig& cfg);

// Unit-modulus angular factor at (rho_bar, sin phi_bar).
inline std::complex<double> phase_factor(double rho_bar, double sin_phibar, PhaseBranch branch) {
  const double a = 1.0 - rho_bar * rho_bar;
  const double b = 2.0 * rho_bar * sin_phibar;
  const double h = std::sqrt(a * a + b * b);
  // theta = atan2(b, a); atan2(0, 0) = 0.
  std::complex<double> f = h > 0.0 ? std::complex<double>(a / h, b / h) : 1.0;
  if (branch == PhaseBranch::Literal && a < 0.0) f = -f;
  return f;
}

// exp(-(rho^2 + z^2)/(2 sigma^2) - 2 sigma^2 p_z^2/hbar^2) / (2 pi^4 hbar^3).
double wigner_prefactor(double rho, double z, double p_z, const PhysConfig& cfg);

}  // namespace funnel::detail
