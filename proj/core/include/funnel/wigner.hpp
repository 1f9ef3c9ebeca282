#pragma once

#include <array>

#include "funnel/phys_config.hpp"
#include "funnel/potential.hpp"
#include "funnel/quadrature.hpp"

namespace funnel {

// Phase-space point in cylindrical position and momentum components.
// Cartesian momenta: p_x = p_rho cos phi - p_phi sin phi, p_y = p_rho sin phi + p_phi cos phi.
struct WignerQuery {
  double rho = 1.0;
  double z = 0.0;
  double phi = 0.0;
  double p_rho = 0.0;
  double p_phi = 0.0;
  double p_z = 0.0;
};

// W and its second in-plane momentum derivatives in the lab frame.
struct WignerEval {
  double w = 0.0;
  double d2w_dpx2 = 0.0;
  double d2w_dpy2 = 0.0;
  double d2w_dpxdpy = 0.0;
  double imag_residual = 0.0;  // largest |Im| over the four components
  double est_error = 0.0;      // error estimate of w, never below the rounding floor
  double est_error_d2 = 0.0;   // largest error estimate of the three derivatives
};

// Angular factor of the double integral.
// Exact: e^{i theta}, theta = atan2(2 rho_bar sin phi_bar, 1 - rho_bar^2), the phase of
//        Psi*(r - s/2) Psi(r + s/2). Continuous across rho_bar = 1.
// Literal: (1 + i k1 sin phi_bar)/sqrt(1 + k1^2 sin^2 phi_bar), k1 = 2 rho_bar/(1 - rho_bar^2),
//        which differs from Exact by sign(1 - rho_bar^2). Kept for comparison only.
enum class PhaseBranch { Exact, Literal };

// Gaussian-envelope peak of W at (rho, z, p_z): f1 (2 sigma/hbar)^3 (2 pi)^(-3/2) e^{-2 sigma^2 p_z^2/hbar^2}.
double w_scale(double rho, double z, double p_z, const PhysConfig& cfg);

// Node counts actually used for a query with in-plane momentum magnitude p_abs.
// Each direction gets at least the QuadSpec count and enough nodes to resolve the
// phase 2 sigma u |p|/hbar of the plane-wave factor.
struct ResolvedCounts {
  int n_rho = 0;          // total radial nodes
  int n_phi_max = 0;      // angular nodes at the outermost radial node
};
ResolvedCounts resolved_counts(double rho, double p_abs, const QuadSpec& spec, const PhysConfig& cfg);

// W and second momentum derivatives by the angle x radial double integral.
// Throws DomainError for rho < kRhoMin, AccuracyError / NonFiniteError from quadrature.
// AccuracyError also when the plane-wave phase 2 sigma u_max |p|/hbar exceeds 2000 rad.
WignerEval eval(const WignerQuery& q, const QuadSpec& spec, const PhysConfig& cfg,
                PhaseBranch branch = PhaseBranch::Exact);

// W at p_rho = p_phi = 0 by a single radial integral of the imaginary-modulus
// elliptic integral. Exact branch: weight sign(1 - rho_bar^2) K(i k1); Literal: K(i k1).
double eval_on_axis(double rho, double z, double p_z, const QuadSpec& spec,
                    const PhysConfig& cfg, PhaseBranch branch = PhaseBranch::Exact);

// Momentum moments at a point. Index order x, y, z (Cartesian lab frame).
struct MomentSet {
  std::array<double, 3> mean_p{};
  std::array<std::array<double, 3>, 3> second_moments{};
  std::array<std::array<double, 3>, 3> pressure{};
};

// Closed forms: <p> = hbar/rho e_phi, <p_x^2> = hbar^2/(4 sigma^2)(1 + 4 sigma^2 sin^2 phi / rho^2), ...,
// pressure = f1 hbar^2/(4 m^2 sigma^2) I. Throws DomainError for rho < kRhoMin.
MomentSet analytic_moments(double rho, double phi, const PhysConfig& cfg, double z = 0.0);

// In-plane momentum grid for numeric moments: uniform spacing, centred on the
// analytic mean, multiplied by a flat-top window
//   g(p) = prod_i [erf((p_i - c_i + L)/tau) - erf((p_i - c_i - L)/tau)] / 2.
struct MomentGrid {
  double half_width = 0.0;  // grid half-width B about the centre
  double spacing = 0.0;     // h
  double flat = 0.0;        // window half-width L
  double taper = 0.0;       // window edge width tau
};

// Window edge tau = 4.5 hbar/rho so the window transform is negligible at |s| = 2 rho;
// flat zone covers the s-Gaussian core, grid extends 4 tau past the flat zone; h
// keeps the first alias of the separation integral beyond its truncation radius.
MomentGrid default_moment_grid(double rho, const QuadSpec& spec, const PhysConfig& cfg);

struct NumericMoments {
  MomentSet moments;        // normalised by the numeric marginal
  double marginal = 0.0;    // int W d^3p
  double density = 0.0;     // density_f1 at the point, for reference
  double est_error = 0.0;   // |marginal(n) - marginal(n/2)| relative to marginal
};

// Tensor momentum-grid quadrature of W (1, p, p p) with the p_z direction integrated
// in closed form. The grid sum is accumulated per separation node: for node s_k the
// factor h^2 sum_j g(p_j) p_j^a e^{-i p_j . s_k/hbar} is separable in x and y.
// Throws AccuracyError when the marginal deviates from density_f1 by more than 1e-3.
NumericMoments numeric_moments(double rho, double z, double phi, const QuadSpec& spec,
                               const MomentGrid& grid, const PhysConfig& cfg);

// Integrals of W and of its second in-plane momentum derivatives over the windowed grid.
struct GridIntegrals {
  double w = 0.0;
  double pxpx = 0.0;
  double pypy = 0.0;
  double pxpy = 0.0;
};
GridIntegrals grid_integrals(double rho, double z, double phi, const QuadSpec& spec,
                             const MomentGrid& grid, const PhysConfig& cfg);

// Normalisation settings: Gauss-Legendre in rho on [0, rho_max], z and p_z in closed form.
struct NormalizationSpec {
  int n_radial = 24;
  double rho_max = 6.5;  // in units of sigma_r
  double spacing_factor = 1.0;  // multiplies every MomentGrid spacing
};

struct NormalizationResult {
  double value = 0.0;
  double max_marginal_dev = 0.0;  // largest relative marginal deviation over the radial nodes
};

// Integral of W over position and momentum; contract is 1.
NormalizationResult normalization(const QuadSpec& spec, const PhysConfig& cfg,
                                  const NormalizationSpec& ns = {});

}  // namespace funnel
