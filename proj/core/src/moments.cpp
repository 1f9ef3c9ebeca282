#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "funnel/analytic_state.hpp"
#include "funnel/errors.hpp"
#include "funnel/wigner.hpp"
#include "wigner_nodes.hpp"

namespace funnel {

MomentSet analytic_moments(double rho, double phi, const PhysConfig& cfg, double z) {
  require_rho(rho, "analytic_moments");
  const double h = cfg.hbar();
  const double s = cfg.sigma_r();
  const double m = cfg.mass();
  const double var = h * h / (4.0 * s * s);
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  MomentSet ms;
  ms.mean_p = {-h * sp / rho, h * cp / rho, 0.0};
  auto& q = ms.second_moments;
  q[0][0] = var * (1.0 + 4.0 * s * s * sp * sp / (rho * rho));
  q[1][1] = var * (1.0 + 4.0 * s * s * cp * cp / (rho * rho));
  q[2][2] = var;
  q[0][1] = q[1][0] = -h * h * sp * cp / (rho * rho);
  q[0][2] = q[2][0] = q[1][2] = q[2][1] = 0.0;
  const double f = density_f1({rho, z, phi}, cfg);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) ms.pressure[a][b] = a == b ? f * var / (m * m) : 0.0;
  }
  return ms;
}

MomentGrid default_moment_grid(double rho, const QuadSpec& spec, const PhysConfig& cfg) {
  require_rho(rho, "default_moment_grid");
  const double h = cfg.hbar();
  const double s = cfg.sigma_r();
  MomentGrid g;
  g.taper = 4.5 * h / rho;
  g.flat = 3.0 * h / s + 4.0 * g.taper;
  g.half_width = g.flat + 4.0 * g.taper;
  const double s_window = 12.0 * h / g.taper;
  g.spacing = std::min(0.5 * g.taper, 2.0 * std::numbers::pi * h / (2.0 * s * spec.u_max + s_window));
  return g;
}

namespace {

// Windowed grid sums of W (1, q, q q) and W_pp, q = p - centre; prefactor included.
struct GridSums {
  double m = 0.0;
  double qx = 0.0;
  double qy = 0.0;
  double qxx = 0.0;
  double qyy = 0.0;
  double qxy = 0.0;
  double wxx = 0.0;
  double wyy = 0.0;
  double wxy = 0.0;
};

// Symmetric 1D grid q_j = j h, |j| <= n, with tabulated g, g q, g q^2 for j >= 0.
struct Grid1D {
  double h = 0.0;
  std::vector<double> g0;
  std::vector<double> g1;
  std::vector<double> g2;
};

Grid1D make_grid(const MomentGrid& mg) {
  Grid1D gr;
  gr.h = mg.spacing;
  const int n = static_cast<int>(std::floor(mg.half_width / mg.spacing));
  for (int j = 0; j <= n; ++j) {
    const double q = j * mg.spacing;
    const double g = 0.5 * (std::erf((q + mg.flat) / mg.taper) - std::erf((q - mg.flat) / mg.taper));
    gr.g0.push_back(g);
    gr.g1.push_back(g * q);
    gr.g2.push_back(g * q * q);
  }
  return gr;
}

// h sum_j g(q_j) q_j^a e^{-i q_j k} for a = 0, 1, 2, using the symmetry of the grid:
// S0 = c0, S1 = -i d1, S2 = c2 with c0, c2 cosine sums and d1 a sine sum.
struct KernelSums {
  double c0 = 0.0;
  double d1 = 0.0;
  double c2 = 0.0;
};

KernelSums kernel_sums(const Grid1D& gr, double k) {
  const double theta = gr.h * k;
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  double c0 = gr.g0[0];
  double d1 = 0.0;
  double c2 = 0.0;
  double cj = 1.0;
  double sj = 0.0;
  const std::size_t n = gr.g0.size();
  for (std::size_t j = 1; j < n; ++j) {
    if (j % 32 == 0) {
      cj = std::cos(j * theta);
      sj = std::sin(j * theta);
    } else {
      const double cn = cj * ct - sj * st;
      sj = sj * ct + cj * st;
      cj = cn;
    }
    c0 += 2.0 * gr.g0[j] * cj;
    d1 += 2.0 * gr.g1[j] * sj;
    c2 += 2.0 * gr.g2[j] * cj;
  }
  return {gr.h * c0, gr.h * d1, gr.h * c2};
}

GridSums grid_sums(double rho, double z, double phi, const QuadSpec& spec, const MomentGrid& mg,
                   double lambda, const PhysConfig& cfg) {
  spec.validate();
  require_rho(rho, "momentum grid quadrature");
  if (!(mg.spacing > 0.0 && mg.taper > 0.0 && mg.flat > 0.0 && mg.half_width >= mg.flat)) {
    throw ConfigError("MomentGrid: spacing, taper and flat must be positive, half_width >= flat");
  }
  const double hbar = cfg.hbar();
  const double sigma = cfg.sigma_r();
  const double cphi = std::cos(phi);
  const double sphi = std::sin(phi);
  const double cx = -hbar * sphi / rho;
  const double cy = hbar * cphi / rho;
  const Grid1D gr = make_grid(mg);

  // Window transform ~ e^{-tau^2 k^2/4}: nodes with tau |s|/(2 hbar) > 6 contribute below e^{-36}.
  const double u_hi = std::min(spec.u_max, 6.0 * hbar / (mg.taper * sigma));
  const double p_abs = std::hypot(cx, cy) + std::sqrt(2.0) * mg.half_width;
  const detail::Layout layout =
      detail::build_layout(rho, p_abs, u_hi, spec.n_phi, spec.n_rho, lambda, cfg);

  CompensatedSum acc[9];
  for (const detail::RadialNode& rn : layout.radial) {
    const detail::AngularTable& tab = detail::angular_table(rn.n_phi, rn.stages);
    const double k = 2.0 * sigma * rn.u / hbar;
    double part[9] = {};
    for (int j = 0; j < rn.n_phi; ++j) {
      const std::complex<double> f = detail::phase_factor(rn.rho_bar, tab.s[j], PhaseBranch::Exact);
      const double kx = k * (cphi * tab.c[j] - sphi * tab.s[j]);
      const double ky = k * (sphi * tab.c[j] + cphi * tab.s[j]);
      const double arg = cx * kx + cy * ky;
      const std::complex<double> t =
          tab.w[j] * f * std::complex<double>(std::cos(arg), -std::sin(arg));
      const KernelSums sx = kernel_sums(gr, kx);
      const KernelSums sy = kernel_sums(gr, ky);
      const std::complex<double> minus_i(0.0, -1.0);
      const double s00 = sx.c0 * sy.c0;
      part[0] += t.real() * s00;
      part[1] += (t * minus_i).real() * sx.d1 * sy.c0;
      part[2] += (t * minus_i).real() * sx.c0 * sy.d1;
      part[3] += t.real() * sx.c2 * sy.c0;
      part[4] += t.real() * sx.c0 * sy.c2;
      part[5] += -t.real() * sx.d1 * sy.d1;
      part[6] += -t.real() * kx * kx * s00;
      part[7] += -t.real() * ky * ky * s00;
      part[8] += -t.real() * kx * ky * s00;
    }
    for (int c = 0; c < 9; ++c) acc[c].add(rn.w * part[c]);
  }
  const double pref = detail::wigner_prefactor(rho, z, 0.0, cfg);
  // Closed-form p_z integral of e^{-2 sigma^2 p_z^2/hbar^2}.
  const double pz_int = std::sqrt(std::numbers::pi / 2.0) * hbar / sigma;
  const double c = pref * pz_int;
  GridSums gs;
  gs.m = c * acc[0].value();
  gs.qx = c * acc[1].value();
  gs.qy = c * acc[2].value();
  gs.qxx = c * acc[3].value();
  gs.qyy = c * acc[4].value();
  gs.qxy = c * acc[5].value();
  gs.wxx = c * acc[6].value();
  gs.wyy = c * acc[7].value();
  gs.wxy = c * acc[8].value();
  if (!std::isfinite(gs.m) || !std::isfinite(gs.qxx) || !std::isfinite(gs.wxx)) {
    throw NonFiniteError("momentum grid quadrature: sum is not finite");
  }
  return gs;
}

MomentSet moments_from_sums(const GridSums& gs, double rho, double phi, const PhysConfig& cfg) {
  const double hbar = cfg.hbar();
  const double m = cfg.mass();
  const double cx = -hbar * std::sin(phi) / rho;
  const double cy = hbar * std::cos(phi) / rho;
  const double mqx = gs.qx / gs.m;
  const double mqy = gs.qy / gs.m;
  const double vxx = gs.qxx / gs.m - mqx * mqx;
  const double vyy = gs.qyy / gs.m - mqy * mqy;
  const double vxy = gs.qxy / gs.m - mqx * mqy;
  const double vzz = hbar * hbar / (4.0 * cfg.sigma_r() * cfg.sigma_r());
  MomentSet ms;
  ms.mean_p = {cx + mqx, cy + mqy, 0.0};
  const double mean[3] = {ms.mean_p[0], ms.mean_p[1], 0.0};
  const double cov[3][3] = {{vxx, vxy, 0.0}, {vxy, vyy, 0.0}, {0.0, 0.0, vzz}};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      ms.second_moments[a][b] = cov[a][b] + mean[a] * mean[b];
      ms.pressure[a][b] = cov[a][b] * gs.m / (m * m);
    }
  }
  return ms;
}

}  // namespace

NumericMoments numeric_moments(double rho, double z, double phi, const QuadSpec& spec,
                               const MomentGrid& grid, const PhysConfig& cfg) {
  const GridSums fine = grid_sums(rho, z, phi, spec, grid, 1.0, cfg);
  const GridSums coarse = grid_sums(rho, z, phi, spec, grid, 0.5, cfg);
  NumericMoments nm;
  nm.moments = moments_from_sums(fine, rho, phi, cfg);
  nm.marginal = fine.m;
  nm.density = density_f1({rho, z, phi}, cfg);
  nm.est_error = std::abs(fine.m - coarse.m) / std::abs(fine.m);
  const double dev = std::abs(nm.marginal / nm.density - 1.0);
  if (!(dev <= 1e-3)) {
    throw AccuracyError("numeric_moments: marginal deviates from density_f1 by " +
                        std::to_string(dev) + " at rho=" + std::to_string(rho));
  }
  return nm;
}

GridIntegrals grid_integrals(double rho, double z, double phi, const QuadSpec& spec,
                             const MomentGrid& grid, const PhysConfig& cfg) {
  const GridSums gs = grid_sums(rho, z, phi, spec, grid, 1.0, cfg);
  return {gs.m, gs.wxx, gs.wyy, gs.wxy};
}

NormalizationResult normalization(const QuadSpec& spec, const PhysConfig& cfg,
                                  const NormalizationSpec& ns) {
  if (ns.n_radial < 2 || !(ns.rho_max > 0.0) || !(ns.spacing_factor > 0.0)) {
    throw ConfigError("NormalizationSpec: n_radial >= 2, rho_max > 0, spacing_factor > 0 required");
  }
  const double sigma = cfg.sigma_r();
  // t = rho^2: int 2 pi rho M drho = pi int M dt; z integral of e^{-z^2/(2 sigma^2)} in closed form.
  const double t_max = ns.rho_max * ns.rho_max * sigma * sigma;
  const Rule r = gauss_legendre(ns.n_radial, 0.0, t_max);
  CompensatedSum acc;
  NormalizationResult res;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    const double rho = std::sqrt(r.x[i]);
    MomentGrid mg = default_moment_grid(rho, spec, cfg);
    mg.spacing *= ns.spacing_factor;
    const GridSums gs = grid_sums(rho, 0.0, 0.0, spec, mg, 1.0, cfg);
    const double f = density_f1({rho, 0.0, 0.0}, cfg);
    res.max_marginal_dev = std::max(res.max_marginal_dev, std::abs(gs.m / f - 1.0));
    acc.add(r.w[i] * gs.m);
  }
  res.value = std::numbers::pi * std::sqrt(2.0 * std::numbers::pi) * sigma * acc.value();
  if (!(std::abs(res.value - 1.0) <= 1e-2)) {
    throw AccuracyError("normalization: integral " + std::to_string(res.value) +
                        " deviates from 1 by more than 1e-2");
  }
  return res;
}

}  // namespace funnel
