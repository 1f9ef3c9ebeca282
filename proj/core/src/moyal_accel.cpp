#include "funnel/moyal_accel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "funnel/errors.hpp"

namespace funnel {

std::string_view to_string(VariantId v) {
  switch (v) {
    case VariantId::Classical: return "Classical";
    case VariantId::V1: return "V1";
    case VariantId::V2: return "V2";
    case VariantId::V3: return "V3";
  }
  return "?";
}

VariantId variant_from_string(std::string_view s) {
  std::string t(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "classical") return VariantId::Classical;
  if (t == "v1") return VariantId::V1;
  if (t == "v2") return VariantId::V2;
  if (t == "v3") return VariantId::V3;
  throw ConfigError("unknown variant '" + std::string(s) + "' (expected Classical, V1, V2, V3)");
}

std::vector<VariantId> all_variants() {
  return {VariantId::Classical, VariantId::V1, VariantId::V2, VariantId::V3};
}

double correction_prefactor(const PhysConfig& cfg) {
  return cfg.hbar() * cfg.hbar() / (24.0 * cfg.mass());
}

std::array<double, 2> variant_weights(VariantId v, const ThirdDerivs& d, double wxx, double wyy,
                                      double wxy) {
  switch (v) {
    case VariantId::Classical: return {0.0, 0.0};
    case VariantId::V1:
      return {d.uxxx * wxx + 3.0 * d.uxyy * wyy, d.uyyy * wyy + 3.0 * d.uxxy * wxx};
    case VariantId::V2:
      return {d.uxxx * wxx + 3.0 * d.uxxy * wxy, d.uyyy * wyy + 3.0 * d.uxyy * wxy};
    case VariantId::V3:
      return {d.uxxx * wxx + d.uxyy * wyy + 2.0 * d.uxxy * wxy,
              d.uyyy * wyy + d.uxxy * wxx + 2.0 * d.uxyy * wxy};
  }
  return {0.0, 0.0};
}

namespace {

std::array<double, 2> classical_accel(double rho, double phi, const PhysConfig& cfg) {
  const GradU g = grad_u({rho, 0.0, phi}, cfg);
  const double m = cfg.mass();
  return {-g.rho * std::cos(phi) / m, -g.rho * std::sin(phi) / m};
}

void require_plane(const WignerQuery& q) {
  if (q.z != 0.0 || q.p_z != 0.0) {
    throw DomainError("acceleration: quantum variants are defined only in the z = 0, p_z = 0 plane");
  }
}

}  // namespace

AccelEval acceleration_from(const WignerEval& e, double rho, double phi, VariantId v,
                            const PhysConfig& cfg) {
  const auto cl = classical_accel(rho, phi, cfg);
  AccelEval out;
  out.wigner = e;
  out.w_at_point = e.w;
  const auto g = variant_weights(v, third_derivs_u({rho, 0.0, phi}, cfg), e.d2w_dpx2, e.d2w_dpy2,
                                 e.d2w_dpxdpy);
  if (v != VariantId::Classical) {
    out.pole_flag = !(std::abs(e.w) >= kPoleEps * w_scale(rho, 0.0, 0.0, cfg));
    const double c = correction_prefactor(cfg);
    out.correction_x = c * g[0] / e.w;
    out.correction_y = c * g[1] / e.w;
  }
  out.a_x = cl[0] + out.correction_x;
  out.a_y = cl[1] + out.correction_y;
  return out;
}

AccelEval acceleration_flagged(const WignerQuery& q, VariantId v, const QuadSpec& spec,
                               const PhysConfig& cfg) {
  require_rho(q.rho, "acceleration");
  if (v == VariantId::Classical) {
    const auto cl = classical_accel(q.rho, q.phi, cfg);
    AccelEval out;
    out.a_x = cl[0];
    out.a_y = cl[1];
    return out;
  }
  require_plane(q);
  return acceleration_from(eval(q, spec, cfg), q.rho, q.phi, v, cfg);
}

AccelEval acceleration(const WignerQuery& q, VariantId v, const QuadSpec& spec,
                       const PhysConfig& cfg) {
  AccelEval a = acceleration_flagged(q, v, spec, cfg);
  if (a.pole_flag) {
    throw PoleError("acceleration: |W| below pole threshold at rho=" + std::to_string(q.rho),
                    a.w_at_point, w_scale(q.rho, 0.0, 0.0, cfg));
  }
  return a;
}

std::vector<ScaleRow> scale_report(const std::vector<double>& rho_values, const PhysConfig& cfg) {
  std::vector<ScaleRow> rows;
  const double h = cfg.hbar();
  const double m = cfg.mass();
  const double s = cfg.sigma_r();
  for (double rho : rho_values) {
    require_rho(rho, "scale_report");
    const GradU g = grad_u({rho, 0.0, 0.0}, cfg);
    ScaleRow r;
    r.rho = rho;
    r.classical_force = std::abs(g.rho);
    r.correction_scale =
        correction_prefactor(cfg) * 12.0 * h * h / (m * std::pow(rho, 5)) * std::pow(2.0 * s / h, 2);
    r.ratio = r.correction_scale / r.classical_force;
    rows.push_back(r);
  }
  return rows;
}

MeanAccelResidual mean_accel_check(double rho, double z, double phi, VariantId v,
                                   const QuadSpec& spec, const PhysConfig& cfg) {
  require_rho(rho, "mean_accel_check");
  if (v != VariantId::Classical && z != 0.0) {
    throw DomainError("mean_accel_check: quantum variants are defined only in the z = 0 plane");
  }
  const MomentGrid grid = default_moment_grid(rho, spec, cfg);
  const GridIntegrals gi = grid_integrals(rho, z, phi, spec, grid, cfg);
  const auto cl = classical_accel(rho, phi, cfg);
  std::array<double, 2> corr = {0.0, 0.0};
  if (v != VariantId::Classical) {
    const auto g = variant_weights(v, third_derivs_u({rho, 0.0, phi}, cfg), gi.pxpx, gi.pypy, gi.pxpy);
    corr = {correction_prefactor(cfg) * g[0], correction_prefactor(cfg) * g[1]};
  }
  // Grid sum of W a, normalised by the numeric marginal.
  const double ax = (cl[0] * gi.w + corr[0]) / gi.w;
  const double ay = (cl[1] * gi.w + corr[1]) / gi.w;
  const double ref = std::hypot(cl[0], cl[1]);
  MeanAccelResidual r;
  r.rx = (ax - cl[0]) / ref;
  r.ry = (ay - cl[1]) / ref;
  r.norm = std::hypot(r.rx, r.ry);
  if (!std::isfinite(r.norm)) throw AccuracyError("mean_accel_check: residual is not finite");
  return r;
}

DivergenceCheck divergence_consistency(const WignerQuery& q, VariantId v, const QuadSpec& spec,
                                       const PhysConfig& cfg, double step) {
  require_rho(q.rho, "divergence_consistency");
  require_plane(q);
  if (!(step > 0.0)) throw ConfigError("divergence_consistency: step must be positive");
  const double cphi = std::cos(q.phi);
  const double sphi = std::sin(q.phi);
  const double px0 = q.p_rho * cphi - q.p_phi * sphi;
  const double py0 = q.p_rho * sphi + q.p_phi * cphi;
  const double m = cfg.mass();
  const ThirdDerivs d = third_derivs_u({q.rho, 0.0, q.phi}, cfg);
  const GradU gu = grad_u({q.rho, 0.0, q.phi}, cfg);
  const double ux = gu.rho * cphi;
  const double uy = gu.rho * sphi;

  struct Sample {
    double w, wxx, wyy, jx, jy;  // jx, jy: W m a
  };
  auto sample = [&](double px, double py) {
    WignerQuery s = q;
    s.p_rho = px * cphi + py * sphi;
    s.p_phi = -px * sphi + py * cphi;
    const WignerEval e = eval(s, spec, cfg);
    const AccelEval a = acceleration_from(e, q.rho, q.phi, v, cfg);
    if (a.pole_flag) {
      throw PoleError("divergence_consistency: stencil point near a zero of W", e.w,
                      w_scale(q.rho, 0.0, 0.0, cfg));
    }
    return Sample{e.w, e.d2w_dpx2, e.d2w_dpy2, e.w * m * a.a_x, e.w * m * a.a_y};
  };
  // f'(0) ~ [f(-2h) - 8 f(-h) + 8 f(h) - f(2h)] / (12 h)
  const double off[4] = {-2.0, -1.0, 1.0, 2.0};
  const double coef[4] = {1.0, -8.0, 8.0, -1.0};
  Sample sx[4];
  Sample sy[4];
  for (int i = 0; i < 4; ++i) {
    sx[i] = sample(px0 + off[i] * step, py0);
    sy[i] = sample(px0, py0 + off[i] * step);
  }
  auto dx = [&](auto field) {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) acc += coef[i] * field(sx[i]);
    return acc / (12.0 * step);
  };
  auto dy = [&](auto field) {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) acc += coef[i] * field(sy[i]);
    return acc / (12.0 * step);
  };
  const double lhs = dx([](const Sample& s) { return s.jx; }) + dy([](const Sample& s) { return s.jy; });
  const double wx = dx([](const Sample& s) { return s.w; });
  const double wy = dy([](const Sample& s) { return s.w; });
  const double wxxx = dx([](const Sample& s) { return s.wxx; });
  const double wxxy = dy([](const Sample& s) { return s.wxx; });
  const double wxyy = dx([](const Sample& s) { return s.wyy; });
  const double wyyy = dy([](const Sample& s) { return s.wyy; });
  const double l0 = -(ux * wx + uy * wy);
  const double l1 = cfg.hbar() * cfg.hbar() / 24.0 *
                    (d.uxxx * wxxx + d.uyyy * wyyy + 3.0 * d.uxxy * wxxy + 3.0 * d.uxyy * wxyy);
  DivergenceCheck r;
  r.lhs = lhs;
  r.rhs = l0 + l1;
  r.scale = std::abs(l0) + std::abs(l1);
  r.residual = std::abs(r.lhs - r.rhs) / r.scale;
  return r;
}

}  // namespace funnel
