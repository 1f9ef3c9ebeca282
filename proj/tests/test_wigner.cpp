#include <doctest.h>

#include <cmath>
#include <numbers>

#include "funnel/errors.hpp"
#include "funnel/wigner.hpp"
#include "oracles.hpp"

using namespace funnel;

namespace {

const PhysConfig kCfg = reduced_defaults();
const QuadSpec kSpec;

oracle::BruteWigner brute(const WignerQuery& q, double s_max_sigma, const PhysConfig& c = kCfg) {
  const double px = q.p_rho * std::cos(q.phi) - q.p_phi * std::sin(q.phi);
  const double py = q.p_rho * std::sin(q.phi) + q.p_phi * std::cos(q.phi);
  return oracle::brute_wigner(q.rho, q.z, q.phi, px, py, q.p_z, c, 160, 200, s_max_sigma);
}

const WignerQuery kQueries[] = {
    {0.5, 0.0, 0.0, 0.0, 0.0, 0.0},   {1.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.7, 0.3, 0.4, 0.5, 1.2, 0.3},   {1.5, 0.0, -1.0, -1.0, 0.8, 0.0},
    {2.5, 0.0, 2.0, 1.5, -2.0, 0.0},  {0.3, 0.0, 1.0, 2.0, 3.0, 0.0},
    {1.2, -0.8, 2.7, -2.5, -1.0, 0.9}, {3.5, 0.0, 0.0, 0.0, 3.0, 0.0},
};

}  // namespace

TEST_CASE("double integral matches a brute-force Cartesian Wigner transform") {
  for (const WignerQuery& q : kQueries) {
    CAPTURE(q.rho);
    CAPTURE(q.p_rho);
    CAPTURE(q.p_phi);
    const WignerEval e = eval(q, kSpec, kCfg);
    const double sc = w_scale(q.rho, q.z, q.p_z, kCfg);
    // Same truncation radius: only quadrature error remains.
    const auto b = brute(q, kSpec.u_max);
    CHECK(std::abs(e.w - b.w) < 1e-10 * sc);
    CHECK(std::abs(e.d2w_dpx2 - b.wxx) < 1e-9 * sc);
    CHECK(std::abs(e.d2w_dpy2 - b.wyy) < 1e-9 * sc);
    CHECK(std::abs(e.d2w_dpxdpy - b.wxy) < 1e-9 * sc);
    // Untruncated transform: the Gaussian tail beyond u_max is e^{-u_max^2/2}.
    const auto full = brute(q, 9.0);
    CHECK(std::abs(e.w - full.w) < 2.0 * std::exp(-kSpec.u_max * kSpec.u_max / 2.0) * sc);
  }
}

TEST_CASE("larger truncation radius converges to the untruncated transform") {
  QuadSpec wide;
  wide.u_max = 8.0;
  for (const WignerQuery& q : {kQueries[0], kQueries[3]}) {
    const auto full = brute(q, 9.0);
    CHECK(std::abs(eval(q, wide, kCfg).w - full.w) < 1e-12 * w_scale(q.rho, q.z, q.p_z, kCfg));
  }
}

TEST_CASE("brute-force transform with other constants") {
  const PhysConfig c(0.8, 1.3, 1.7);
  const WignerQuery q{1.1, 0.4, 0.3, 0.6, 0.9, 0.2};
  const auto b = brute(q, kSpec.u_max, c);
  CHECK(std::abs(eval(q, kSpec, c).w - b.w) < 1e-10 * w_scale(q.rho, q.z, q.p_z, c));
}

TEST_CASE("elliptic route agrees on the momentum axis") {
  for (double rho : {0.3, 0.5, 1.0, 2.0}) {
    const double a = eval_on_axis(rho, 0.0, 0.0, kSpec, kCfg);
    const double w = eval({rho, 0.0, 0.0, 0.0, 0.0, 0.0}, kSpec, kCfg).w;
    CHECK(std::abs(w - a) < 1e-6 * std::abs(a));
  }
  // Value at rho = 0.5 from the brute-force transform: the vortex makes W negative here.
  CHECK(eval_on_axis(0.5, 0.0, 0.0, kSpec, kCfg) == doctest::Approx(-0.0178400016).epsilon(1e-8));
}

TEST_CASE("elliptic route factorises in z and p_z") {
  const double base = eval_on_axis(0.8, 0.0, 0.0, kSpec, kCfg);
  CHECK(eval_on_axis(0.8, 1.3, 0.0, kSpec, kCfg) ==
        doctest::Approx(base * std::exp(-1.3 * 1.3 / 2.0)).epsilon(1e-14));
  CHECK(eval_on_axis(0.8, 0.0, 0.7, kSpec, kCfg) ==
        doctest::Approx(base * std::exp(-2.0 * 0.7 * 0.7)).epsilon(1e-14));
}

TEST_CASE("p_z dependence is a pure Gaussian factor") {
  const WignerQuery q0{0.9, 0.2, 0.5, 0.4, 1.1, 0.0};
  const double base = eval(q0, kSpec, kCfg).w;
  for (double pz : {0.3, -0.8, 1.5}) {
    WignerQuery q = q0;
    q.p_z = pz;
    CHECK(eval(q, kSpec, kCfg).w * std::exp(2.0 * pz * pz) == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("second derivatives match finite differences of w") {
  const double h = 1e-3;
  for (const WignerQuery& q : {kQueries[2], kQueries[3], kQueries[6]}) {
    const double c = std::cos(q.phi);
    const double s = std::sin(q.phi);
    // p_x shift in lab frame maps to (p_rho, p_phi) += (cos phi, -sin phi) dp.
    auto w_at = [&](double dpx, double dpy) {
      WignerQuery t = q;
      t.p_rho += c * dpx + s * dpy;
      t.p_phi += -s * dpx + c * dpy;
      return eval(t, kSpec, kCfg).w;
    };
    const WignerEval e = eval(q, kSpec, kCfg);
    REQUIRE(std::abs(e.w) > 1e-6);
    auto d2 = [&](double ax, double ay) {
      return (-w_at(2 * h * ax, 2 * h * ay) + 16.0 * w_at(h * ax, h * ay) - 30.0 * w_at(0, 0) +
              16.0 * w_at(-h * ax, -h * ay) - w_at(-2 * h * ax, -2 * h * ay)) /
             (12.0 * h * h);
    };
    const double fxx = d2(1, 0);
    const double fyy = d2(0, 1);
    const double fxy = (w_at(h, h) - w_at(h, -h) - w_at(-h, h) + w_at(-h, -h)) / (4.0 * h * h);
    const double sc = std::abs(e.d2w_dpx2) + std::abs(e.d2w_dpy2);
    CHECK(std::abs(e.d2w_dpx2 - fxx) < 1e-5 * sc);
    CHECK(std::abs(e.d2w_dpy2 - fyy) < 1e-5 * sc);
    CHECK(std::abs(e.d2w_dpxdpy - fxy) < 1e-5 * sc);
  }
}

TEST_CASE("realness and momentum parity") {
  for (const WignerQuery& q : kQueries) {
    const WignerEval e = eval(q, kSpec, kCfg);
    CHECK(e.imag_residual < 1e-8 * std::abs(e.w));
    WignerQuery r = q;
    r.p_rho = -q.p_rho;
    const WignerEval er = eval(r, kSpec, kCfg);
    CHECK(std::abs(e.w - er.w) <= e.est_error + er.est_error);
  }
}

TEST_CASE("rotation invariance in the lab angle") {
  const WignerQuery q{1.3, 0.0, 0.0, 0.7, -0.4, 0.0};
  const double w0 = eval(q, kSpec, kCfg).w;
  for (double phi : {0.9, -2.4}) {
    WignerQuery r = q;
    r.phi = phi;
    CHECK(eval(r, kSpec, kCfg).w == doctest::Approx(w0).epsilon(1e-12));
  }
}

TEST_CASE("literal branch differs from the exact phase") {
  for (double rho : {0.5, 1.0}) {
    const double lit = eval({rho, 0.0, 0.0, 0.0, 0.0, 0.0}, kSpec, kCfg, PhaseBranch::Literal).w;
    const double lit_axis = eval_on_axis(rho, 0.0, 0.0, kSpec, kCfg, PhaseBranch::Literal);
    CHECK(std::abs(lit - lit_axis) < 1e-6 * std::abs(lit_axis));
    CHECK(std::abs(lit - eval_on_axis(rho, 0.0, 0.0, kSpec, kCfg)) > 1e-3 * std::abs(lit));
  }
}

TEST_CASE("negative values on the (rho, p_phi) plane") {
  double lowest = 1.0;
  for (double rho : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0}) {
    for (double pp : {-6.0, -3.0, 0.0, 3.0, 6.0}) {
      lowest = std::min(lowest, eval({rho, 0.0, 0.0, 0.0, pp, 0.0}, kSpec, kCfg).w);
    }
  }
  CHECK(lowest < 0.0);
}

TEST_CASE("node counts resolve the plane-wave factor") {
  const ResolvedCounts lo = resolved_counts(1.0, 0.0, kSpec, kCfg);
  const ResolvedCounts hi = resolved_counts(1.0, 10.0, kSpec, kCfg);
  CHECK(lo.n_rho >= kSpec.n_rho);
  CHECK(lo.n_phi_max >= kSpec.n_phi);
  CHECK(hi.n_rho > lo.n_rho);
  CHECK(hi.n_phi_max > lo.n_phi_max);
}

TEST_CASE("unresolvable momenta are refused") {
  CHECK_THROWS_AS(eval({1.0, 0.0, 0.0, 0.0, 1000.0, 0.0}, kSpec, kCfg), AccuracyError);
  CHECK_NOTHROW(eval({1.0, 0.0, 0.0, 0.0, 20.0, 0.0}, kSpec, kCfg));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(eval({0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, kSpec, kCfg), DomainError);
  CHECK_THROWS_AS(eval_on_axis(1e-12, 0.0, 0.0, kSpec, kCfg), DomainError);
}

TEST_CASE("w_scale envelope") {
  // f1 (2 sigma/hbar)^3 (2 pi)^(-3/2) at the origin in reduced units.
  CHECK(w_scale(0.0, 0.0, 0.0, kCfg) == doctest::Approx(8.0 / std::pow(2.0 * std::numbers::pi, 3.0)));
  CHECK(w_scale(0.0, 0.0, 1.0, kCfg) == doctest::Approx(w_scale(0.0, 0.0, 0.0, kCfg) * std::exp(-2.0)));
}
