#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "funnel/phys_config.hpp"
#include "funnel/potential.hpp"
#include "funnel/quadrature.hpp"
#include "funnel/wigner.hpp"

namespace funnel {

// Classical law and the three distributions of the l = 1 Moyal term over the
// in-plane components. V3 reproduces the Moyal right-hand side term by term.
enum class VariantId { Classical, V1, V2, V3 };

std::string_view to_string(VariantId v);
// Accepts "Classical", "V1", "V2", "V3" (case-insensitive). Throws ConfigError otherwise.
VariantId variant_from_string(std::string_view s);
std::vector<VariantId> all_variants();

// Pole threshold relative to w_scale.
inline constexpr double kPoleEps = 1e-8;

struct AccelEval {
  double a_x = 0.0;
  double a_y = 0.0;
  double correction_x = 0.0;
  double correction_y = 0.0;
  double w_at_point = 0.0;
  bool pole_flag = false;
  WignerEval wigner;  // populated for non-classical variants
};

// hbar^2/(24 m): coefficient (hbar/2)^2/(m^3 3!) of the l = 1 term rewritten for
// momentum derivatives with f = m^3 W and d/dv = m d/dp.
double correction_prefactor(const PhysConfig& cfg);

// G_x, G_y of the variant from third derivatives of U and second momentum derivatives of W.
std::array<double, 2> variant_weights(VariantId v, const ThirdDerivs& d, double wxx, double wyy,
                                      double wxy);

// Acceleration from an already evaluated W at lab point (rho, phi) in the z = 0 plane.
// Sets pole_flag (no throw) when |w| < kPoleEps * w_scale.
AccelEval acceleration_from(const WignerEval& e, double rho, double phi, VariantId v,
                            const PhysConfig& cfg);

// a = -(1/m) grad U + hbar^2/(24 m) G/W. Classical skips the Wigner evaluation.
// Throws PoleError near zeros of W, DomainError when z or p_z is nonzero for a quantum variant.
AccelEval acceleration(const WignerQuery& q, VariantId v, const QuadSpec& spec,
                       const PhysConfig& cfg);

// Same as acceleration, but reports poles through pole_flag instead of throwing.
AccelEval acceleration_flagged(const WignerQuery& q, VariantId v, const QuadSpec& spec,
                               const PhysConfig& cfg);

struct ScaleRow {
  double rho = 0.0;
  double classical_force = 0.0;   // |grad U| at z = 0
  double correction_scale = 0.0;  // hbar^2/(24 m) * 12 hbar^2/(m rho^5) * (2 sigma/hbar)^2
  double ratio = 0.0;
};

// Correction scale against the classical force per rho. Throws DomainError for rho < kRhoMin.
std::vector<ScaleRow> scale_report(const std::vector<double>& rho_values, const PhysConfig& cfg);

// Momentum-grid mean acceleration minus -(1/m) grad U, divided by |grad U|/m.
// W a is accumulated as -W grad U/m + hbar^2/(24 m) G, the same product without 1/W.
struct MeanAccelResidual {
  double rx = 0.0;
  double ry = 0.0;
  double norm = 0.0;
};
MeanAccelResidual mean_accel_check(double rho, double z, double phi, VariantId v,
                                   const QuadSpec& spec, const PhysConfig& cfg);

// Momentum divergence of the current W m a against -grad U . grad_p W + hbar^2/24 U_abc W_abc,
// both by 4th-order central differences with step `step` in p.
struct DivergenceCheck {
  double lhs = 0.0;       // div_p (W m a)
  double rhs = 0.0;       // truncated series
  double scale = 0.0;     // |l=0 term| + |l=1 term|
  double residual = 0.0;  // |lhs - rhs| / scale
};
DivergenceCheck divergence_consistency(const WignerQuery& q, VariantId v, const QuadSpec& spec,
                                       const PhysConfig& cfg, double step = 0.02);

}  // namespace funnel
