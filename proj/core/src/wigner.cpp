#include "funnel/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>

#include "funnel/analytic_state.hpp"
#include "funnel/errors.hpp"
#include "funnel/special_functions.hpp"
#include "wigner_nodes.hpp"

namespace funnel {

namespace detail {

namespace {

// Resolution of the plane-wave factor exp(-i a cos(angle - alpha)) and of the radial phase.
constexpr double kRadialPerRadian = 0.6;
constexpr int kRadialMin = 24;
constexpr double kAngularPerRadian = 2.5;
constexpr int kAngularMin = 56;
constexpr double kMapStretch = 2.5;
// Nodes at the finest level per resolved node; level lambda = 0.5 must still resolve.
constexpr double kLevelFactor = 2.0;
// Sine map for rho_bar close to 1, where |k1| = 2 rho_bar/|1 - rho_bar^2| > 2.
constexpr double kMapThresholdK1 = 2.0;
constexpr int kMapStages = 2;
// Largest plane-wave phase 2 sigma u_max |p|/hbar accepted before the node count explodes.
constexpr double kMaxPhase = 2000.0;

int round_up(int n, int m) { return ((n + m - 1) / m) * m; }

int radial_resolution(double phase) {
  return static_cast<int>(std::ceil(kRadialPerRadian * phase)) + kRadialMin;
}

int angular_resolution(double a) {
  return static_cast<int>(std::ceil(kAngularPerRadian * a + 6.0 * std::cbrt(a))) + kAngularMin;
}

int scaled(double lambda, int base, int resolution, int multiple) {
  const int n = static_cast<int>(std::lround(lambda * std::max<double>(base, kLevelFactor * resolution)));
  return std::max(multiple, round_up(n, multiple));
}

}  // namespace

const AngularTable& angular_table(int n, int stages) {
  thread_local std::map<std::pair<int, int>, AngularTable> cache;
  const auto key = std::make_pair(n, stages);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const Rule r = periodic_rule(n, stages);
  AngularTable t;
  t.c.resize(n);
  t.s.resize(n);
  t.w = r.w;
  for (int j = 0; j < n; ++j) {
    t.c[j] = std::cos(r.x[j]);
    t.s[j] = std::sin(r.x[j]);
  }
  return cache.emplace(key, std::move(t)).first->second;
}

std::size_t Layout::terms() const {
  std::size_t n = 0;
  for (const auto& r : radial) n += static_cast<std::size_t>(r.n_phi);
  return n;
}

Layout build_layout(double rho, double p_abs, double u_hi, int n_phi_base, int n_rho_base,
                    double lambda, const PhysConfig& cfg) {
  const double sigma = cfg.sigma_r();
  const double hbar = cfg.hbar();
  // Radial phase of exp(-i p.s/hbar) per unit u: |s| = 2 sigma u.
  const double phase_per_u = 2.0 * sigma * p_abs / hbar;
  const double u_star = rho / sigma;

  struct Segment {
    double a;
    double b;
    Grading g;
    int n;
  };
  std::vector<Segment> segs;
  if (u_star < u_hi) {
    const int n1 = scaled(lambda, n_rho_base / 2, radial_resolution(phase_per_u * u_star), 2);
    const int n2 =
        scaled(lambda, n_rho_base / 2, radial_resolution(phase_per_u * (u_hi - u_star)), 2);
    segs.push_back({0.0, u_star, Grading::TowardUpper, n1});
    segs.push_back({u_star, u_hi, Grading::TowardLower, n2});
  } else {
    const int n = scaled(lambda, n_rho_base, radial_resolution(phase_per_u * u_hi), 2);
    segs.push_back({0.0, u_hi, Grading::None, n});
  }

  Layout layout;
  for (const Segment& sg : segs) {
    const Rule r = graded_gauss_legendre(sg.n, sg.a, sg.b, sg.g);
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      RadialNode node;
      node.u = r.x[i];
      node.w = r.w[i] * std::exp(-0.5 * node.u * node.u) * node.u;
      node.rho_bar = sigma * node.u / rho;
      const double den = std::abs(1.0 - node.rho_bar * node.rho_bar);
      const bool mapped = 2.0 * node.rho_bar > kMapThresholdK1 * den;
      node.stages = mapped ? kMapStages : 0;
      int res = angular_resolution(phase_per_u * node.u);
      if (mapped) res = static_cast<int>(std::ceil(kMapStretch * res));
      node.n_phi = scaled(lambda, n_phi_base, res, 8);
      layout.radial.push_back(node);
    }
  }
  return layout;
}

double wigner_prefactor(double rho, double z, double p_z, const PhysConfig& cfg) {
  const double s = cfg.sigma_r();
  const double h = cfg.hbar();
  const double pi4 = std::pow(std::numbers::pi, 4);
  return std::exp(-(rho * rho + z * z) / (2.0 * s * s) - 2.0 * s * s * p_z * p_z / (h * h)) /
         (2.0 * pi4 * h * h * h);
}

}  // namespace detail

namespace {

using detail::Layout;

// Components: W, W_pxpx, W_pypy, W_pxpy (before the prefactor).
struct Sums {
  std::complex<double> v[4];
  double l1[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t terms = 0;
};

// sin and cos for |x| up to about 1e5: Cody-Waite reduction by pi/2 and the
// fdlibm kernel polynomials. Branch-free so the node loop vectorises.
struct SinCos {
  double s;
  double c;
};

inline SinCos sincos_kernel(double x) {
  constexpr double kTwoOverPi = 0.63661977236758134308;
  constexpr double kP1 = 1.57079632673412561417e+00;
  constexpr double kP2 = 6.07710050650619224932e-11;
  constexpr double kP3 = 2.02226624879595063154e-21;
  constexpr double kRound = 6755399441055744.0;
  const double q = (x * kTwoOverPi + kRound) - kRound;
  const double r = ((x - q * kP1) - q * kP2) - q * kP3;
  const double z = r * r;
  const double ps = r + r * z *
                            (-1.66666666666666324348e-01 +
                             z * (8.33333333332248946124e-03 +
                                  z * (-1.98412698298579493134e-04 +
                                       z * (2.75573137070700676789e-06 +
                                            z * (-2.50507602534068634195e-08 +
                                                 z * 1.58969099521155010221e-10)))));
  const double pc = 1.0 - 0.5 * z +
                    z * z *
                        (4.16666666666666019037e-02 +
                         z * (-1.38888888888741095749e-03 +
                              z * (2.48015872894767294178e-05 +
                                   z * (-2.75573143513906633035e-07 +
                                        z * (2.08757232129817482790e-09 +
                                             z * -1.13596475577881948265e-11)))));
  const int n = static_cast<int>(q) & 3;
  const double swap = static_cast<double>(n & 1);
  const double s0 = ps + swap * (pc - ps);
  const double c0 = pc + swap * (ps - pc);
  return {static_cast<double>(1 - (n & 2)) * s0, static_cast<double>(1 - ((n + 1) & 2)) * c0};
}

Sums wigner_sums(const Layout& layout, double phi, double px, double py, const PhysConfig& cfg,
                 PhaseBranch branch) {
  const double cphi = std::cos(phi);
  const double sphi = std::sin(phi);
  const double sigma = cfg.sigma_r();
  const double hbar = cfg.hbar();
  CompensatedComplexSum acc[4];
  CompensatedSum l1[4];
  for (const detail::RadialNode& rn : layout.radial) {
    const detail::AngularTable& tab = detail::angular_table(rn.n_phi, rn.stages);
    const double k = 2.0 * sigma * rn.u / hbar;  // |s|/hbar
    const double k2 = k * k;
    const double a = 1.0 - rn.rho_bar * rn.rho_bar;
    const double b = 2.0 * rn.rho_bar;
    const double sign = (branch == PhaseBranch::Literal && a < 0.0) ? -1.0 : 1.0;
    // Momentum in the frame rotated by phi: p . e(phi + phi_bar) = qx cos phi_bar + qy sin phi_bar.
    const double qx = k * (px * cphi + py * sphi);
    const double qy = k * (py * cphi - px * sphi);
    double r0 = 0.0, r1 = 0.0, r2 = 0.0, r3 = 0.0;
    double i0 = 0.0, i1 = 0.0, i2 = 0.0, i3 = 0.0;
    double mag0 = 0.0;
    double magxx = 0.0;
    double magyy = 0.0;
    double magxy = 0.0;
    const double* cv = tab.c.data();
    const double* sv = tab.s.data();
    const double* wv = tab.w.data();
    const int n = rn.n_phi;
#pragma omp simd reduction(+ : r0, r1, r2, r3, i0, i1, i2, i3, mag0, magxx, magyy, magxy)
    for (int j = 0; j < n; ++j) {
      const double bs = b * sv[j];
      const double h = std::sqrt(a * a + bs * bs);
      // theta = atan2(b sin, a); h = 0 only at rho_bar = 1 with sin = 0, where theta = 0.
      const double inv = sign / std::max(h, 1e-300);
      const double fr = h > 0.0 ? a * inv : sign;
      const double fi = bs * inv;
      const SinCos e = sincos_kernel(qx * cv[j] + qy * sv[j]);
      const double sn = e.s;
      const double cs = e.c;
      // t = w f e^{-i arg}
      const double tr = wv[j] * (fr * cs + fi * sn);
      const double ti = wv[j] * (fi * cs - fr * sn);
      const double ex = cphi * cv[j] - sphi * sv[j];
      const double ey = sphi * cv[j] + cphi * sv[j];
      const double xx = -k2 * ex * ex;
      const double yy = -k2 * ey * ey;
      const double xy = -k2 * ex * ey;
      r0 += tr;
      i0 += ti;
      r1 += xx * tr;
      i1 += xx * ti;
      r2 += yy * tr;
      i2 += yy * ti;
      r3 += xy * tr;
      i3 += xy * ti;
      mag0 += wv[j];
      magxx += -xx * wv[j];
      magyy += -yy * wv[j];
      magxy += std::fabs(xy) * wv[j];
    }
    acc[0].add(rn.w * std::complex<double>(r0, i0));
    acc[1].add(rn.w * std::complex<double>(r1, i1));
    acc[2].add(rn.w * std::complex<double>(r2, i2));
    acc[3].add(rn.w * std::complex<double>(r3, i3));
    l1[0].add(rn.w * mag0);
    l1[1].add(rn.w * magxx);
    l1[2].add(rn.w * magyy);
    l1[3].add(rn.w * magxy);
  }
  Sums s;
  for (int c = 0; c < 4; ++c) {
    s.v[c] = acc[c].value();
    s.l1[c] = l1[c].value();
  }
  s.terms = layout.terms();
  return s;
}

// Below this fraction of the integrand's L1 norm a relative target is cancellation-dominated.
constexpr double kCancellationFloor = 1e-4;

bool within(double est, double value, double l1, std::size_t terms, double tol) {
  return est <= std::max(tol * std::max(std::abs(value), kCancellationFloor * l1),
                         rounding_floor(l1, terms));
}

void require_finite(const Sums& s) {
  for (const auto& v : s.v) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NonFiniteError("wigner eval: quadrature sum is not finite");
    }
  }
}

}  // namespace

double w_scale(double rho, double z, double p_z, const PhysConfig& cfg) {
  const double s = cfg.sigma_r();
  const double h = cfg.hbar();
  const double f = density_f1({rho, z, 0.0}, cfg);
  return f * std::pow(2.0 * s / h, 3) * std::pow(2.0 * std::numbers::pi, -1.5) *
         std::exp(-2.0 * s * s * p_z * p_z / (h * h));
}

ResolvedCounts resolved_counts(double rho, double p_abs, const QuadSpec& spec,
                               const PhysConfig& cfg) {
  const Layout l = detail::build_layout(rho, p_abs, spec.u_max, spec.n_phi, spec.n_rho, 1.0, cfg);
  ResolvedCounts rc;
  rc.n_rho = static_cast<int>(l.radial.size());
  rc.n_phi_max = l.radial.empty() ? 0 : l.radial.back().n_phi;
  return rc;
}

WignerEval eval(const WignerQuery& q, const QuadSpec& spec, const PhysConfig& cfg,
                PhaseBranch branch) {
  spec.validate();
  require_rho(q.rho, "wigner eval");
  if (!std::isfinite(q.z) || !std::isfinite(q.phi) || !std::isfinite(q.p_rho) ||
      !std::isfinite(q.p_phi) || !std::isfinite(q.p_z)) {
    throw DomainError("wigner eval: query components must be finite");
  }
  const double cphi = std::cos(q.phi);
  const double sphi = std::sin(q.phi);
  const double px = q.p_rho * cphi - q.p_phi * sphi;
  const double py = q.p_rho * sphi + q.p_phi * cphi;
  const double p_abs = std::hypot(q.p_rho, q.p_phi);
  const double pref = detail::wigner_prefactor(q.rho, q.z, q.p_z, cfg);
  const double phase = 2.0 * cfg.sigma_r() * spec.u_max * p_abs / cfg.hbar();
  if (!(phase <= detail::kMaxPhase)) {
    throw AccuracyError("wigner eval: in-plane momentum " + std::to_string(p_abs) +
                        " needs a plane-wave phase of " + std::to_string(phase) +
                        " rad, above the resolvable limit " + std::to_string(detail::kMaxPhase));
  }

  auto level = [&](double lambda) {
    const Layout l =
        detail::build_layout(q.rho, p_abs, spec.u_max, spec.n_phi, spec.n_rho, lambda, cfg);
    Sums s = wigner_sums(l, q.phi, px, py, cfg, branch);
    require_finite(s);
    return s;
  };

  const Sums coarse = level(0.5);
  Sums fine = level(1.0);
  auto estimate = [](const Sums& a, const Sums& b, int c) {
    return std::abs(a.v[c].real() - b.v[c].real());
  };
  auto w_within = [&](const Sums& f, const Sums& c) {
    return within(estimate(f, c, 0), f.v[0].real(), f.l1[0], f.terms, spec.target_tol);
  };
  Sums ref = coarse;
  if (!w_within(fine, coarse)) {
    Sums refined = level(2.0);
    ref = fine;
    fine = refined;
    if (!w_within(fine, ref)) {
      throw AccuracyError("wigner eval: error estimate exceeds target_tol after refinement at rho=" +
                          std::to_string(q.rho) + ", |p|=" + std::to_string(p_abs));
    }
  }

  WignerEval e;
  e.w = pref * fine.v[0].real();
  e.d2w_dpx2 = pref * fine.v[1].real();
  e.d2w_dpy2 = pref * fine.v[2].real();
  e.d2w_dpxdpy = pref * fine.v[3].real();
  double im = 0.0;
  for (int c = 0; c < 4; ++c) im = std::max(im, std::abs(fine.v[c].imag()));
  e.imag_residual = pref * im;
  auto floored = [&](int c) {
    return pref * std::max(estimate(fine, ref, c), rounding_floor(fine.l1[c], fine.terms));
  };
  e.est_error = floored(0);
  e.est_error_d2 = std::max({floored(1), floored(2), floored(3)});
  if (std::abs(e.w) < 1e-300) e.w = 0.0;
  return e;
}

double eval_on_axis(double rho, double z, double p_z, const QuadSpec& spec, const PhysConfig& cfg,
                    PhaseBranch branch) {
  spec.validate();
  require_rho(rho, "eval_on_axis");
  const double sigma = cfg.sigma_r();
  const double u_star = rho / sigma;
  std::vector<Rule> rules;
  if (u_star < spec.u_max) {
    rules.push_back(graded_gauss_legendre(spec.n_rho, 0.0, u_star, Grading::TowardUpper));
    rules.push_back(graded_gauss_legendre(spec.n_rho, u_star, spec.u_max, Grading::TowardLower));
  } else {
    rules.push_back(gauss_legendre(spec.n_rho, 0.0, spec.u_max));
  }
  CompensatedSum acc;
  for (const Rule& r : rules) {
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      const double u = r.x[i];
      const double rb = sigma * u / rho;
      const double a = 1.0 - rb * rb;
      if (a == 0.0) continue;  // K(i k1) -> 0 as |k1| -> infinity
      const double k1 = 2.0 * rb / a;
      double kk = elliptic_k_imag(k1);
      if (branch == PhaseBranch::Exact && a < 0.0) kk = -kk;
      acc.add(r.w[i] * kk * std::exp(-0.5 * u * u) * u);
    }
  }
  const double v = acc.value();
  if (!std::isfinite(v)) throw NonFiniteError("eval_on_axis: radial sum is not finite");
  // Angular integral of e^{i theta} over the full period equals sign(1 - rho_bar^2) 4 K(i k1).
  return 4.0 * detail::wigner_prefactor(rho, z, p_z, cfg) * v;
}

}  // namespace funnel
