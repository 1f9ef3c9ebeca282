#include <doctest.h>

#include <cmath>
#include <numbers>

#include "funnel/errors.hpp"
#include "funnel/moyal_accel.hpp"
#include "funnel/potential.hpp"

using namespace funnel;

namespace {
const PhysConfig kCfg = reduced_defaults();
const QuadSpec kSpec;
}  // namespace

TEST_CASE("variant names round trip") {
  for (VariantId v : all_variants()) CHECK(variant_from_string(to_string(v)) == v);
  CHECK(variant_from_string("v3") == VariantId::V3);
  CHECK(variant_from_string("classical") == VariantId::Classical);
  CHECK_THROWS_AS(variant_from_string("V4"), ConfigError);
  CHECK(all_variants().size() == 4);
}

TEST_CASE("correction prefactor") {
  CHECK(correction_prefactor(kCfg) == doctest::Approx(1.0 / 24.0));
  CHECK(correction_prefactor(PhysConfig(2.0, 0.5, 1.0)) == doctest::Approx(4.0 / 12.0));
}

TEST_CASE("variants share the scalar Moyal source") {
  // G is linear in (W_xx, W_yy, W_xy); d/dp_x G_x + d/dp_y G_y follows by substituting
  // the corresponding third derivatives. Every variant must give the full contraction
  // U_xxx W_xxx + 3 U_xxy W_xxy + 3 U_xyy W_xyy + U_yyy W_yyy.
  const ThirdDerivs d{1.3, -0.4, 0.7, 0.2};
  const double wxxx = 0.9;
  const double wxxy = -0.6;
  const double wxyy = 0.35;
  const double wyyy = 1.7;
  const double series = d.uxxx * wxxx + 3.0 * d.uxxy * wxxy + 3.0 * d.uxyy * wxyy + d.uyyy * wyyy;
  for (VariantId v : {VariantId::V1, VariantId::V2, VariantId::V3}) {
    const double div = variant_weights(v, d, wxxx, wxyy, wxxy)[0] +
                       variant_weights(v, d, wxxy, wyyy, wxyy)[1];
    CHECK(div == doctest::Approx(series).epsilon(1e-14));
  }
  const auto v1 = variant_weights(VariantId::V1, d, 0.9, -0.6, 0.35);
  const auto v2 = variant_weights(VariantId::V2, d, 0.9, -0.6, 0.35);
  const auto v3 = variant_weights(VariantId::V3, d, 0.9, -0.6, 0.35);
  CHECK((v1[0] != doctest::Approx(v3[0]) || v1[1] != doctest::Approx(v3[1])));
  CHECK((v2[0] != doctest::Approx(v3[0]) || v2[1] != doctest::Approx(v3[1])));
  const auto c = variant_weights(VariantId::Classical, d, 0.9, -0.6, 0.35);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == 0.0);
}

TEST_CASE("classical acceleration is -grad U / m") {
  const AccelEval a = acceleration({1.0, 0.0, 0.0, 0.3, 0.2, 0.0}, VariantId::Classical, kSpec, kCfg);
  CHECK(a.a_x == doctest::Approx(-1.25));
  CHECK(std::abs(a.a_y) < 1e-15);
  CHECK(a.correction_x == 0.0);
  const PhysConfig heavy(1.0, 2.0, 1.0);
  const AccelEval b = acceleration({0.8, 0.0, 1.0, 0.0, 0.0, 0.0}, VariantId::Classical, kSpec, heavy);
  const GradU g = grad_u({0.8, 0.0, 1.0}, heavy);
  CHECK(b.a_x == doctest::Approx(-g.rho * std::cos(1.0) / 2.0));
  CHECK(b.a_y == doctest::Approx(-g.rho * std::sin(1.0) / 2.0));
}

TEST_CASE("quantum acceleration adds the weighted correction") {
  const WignerQuery q{0.5, 0.0, 0.0, 0.0, 3.0 * std::sqrt(1.5), 0.0};
  const AccelEval v3 = acceleration(q, VariantId::V3, kSpec, kCfg);
  const AccelEval v1 = acceleration(q, VariantId::V1, kSpec, kCfg);
  const WignerEval& e = v3.wigner;
  const ThirdDerivs d = third_derivs_u({0.5, 0.0, 0.0}, kCfg);
  const auto g = variant_weights(VariantId::V3, d, e.d2w_dpx2, e.d2w_dpy2, e.d2w_dpxdpy);
  CHECK(v3.correction_x == doctest::Approx(g[0] / (24.0 * e.w)));
  CHECK(v3.correction_y == doctest::Approx(g[1] / (24.0 * e.w)).scale(1.0));
  CHECK(v3.a_x == doctest::Approx(-grad_u({0.5, 0.0, 0.0}, kCfg).rho + v3.correction_x));
  const double diff = std::hypot(v1.correction_x - v3.correction_x, v1.correction_y - v3.correction_y);
  // Propagated quadrature error of both corrections.
  const double dsum = std::abs(d.uxxx) + std::abs(d.uyyy) + 3.0 * (std::abs(d.uxxy) + std::abs(d.uxyy));
  const double corr = std::hypot(v3.correction_x, v3.correction_y) + std::hypot(v1.correction_x, v1.correction_y);
  const double err = (dsum * e.est_error_d2 / 24.0 + corr * e.est_error) / std::abs(e.w);
  CHECK(diff > err);
}

TEST_CASE("pole handling") {
  WignerEval e;
  e.w = 0.0;
  const AccelEval a = acceleration_from(e, 1.0, 0.0, VariantId::V3, kCfg);
  CHECK(a.pole_flag);
  CHECK_FALSE(acceleration_from(e, 1.0, 0.0, VariantId::Classical, kCfg).pole_flag);
  CHECK_THROWS_AS(acceleration({1.0, 0.5, 0.0, 0.0, 0.0, 0.0}, VariantId::V1, kSpec, kCfg), DomainError);
  CHECK_THROWS_AS(acceleration({1.0, 0.0, 0.0, 0.0, 0.0, 0.5}, VariantId::V2, kSpec, kCfg), DomainError);
}

TEST_CASE("scale report") {
  std::vector<double> rho;
  for (int i = 0; i < 50; ++i) rho.push_back(0.3 + 4.7 * i / 49.0);
  const auto rows = scale_report(rho, kCfg);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].ratio < rows[i - 1].ratio);
  const auto pair = scale_report({0.5, 2.5}, kCfg);
  CHECK(pair[0].ratio > 10.0 * pair[1].ratio);
  // Large radius: the classical force approaches the harmonic part hbar^2 rho/(4 m sigma^4).
  const auto far = scale_report({50.0}, kCfg);
  CHECK(far[0].classical_force == doctest::Approx(12.5).epsilon(1e-6));
  CHECK(far[0].correction_scale == doctest::Approx(2.0 / std::pow(50.0, 5.0)));
  CHECK_THROWS_AS(scale_report({0.0}, kCfg), DomainError);
}

TEST_CASE("mean acceleration equals the classical force") {
  CHECK(mean_accel_check(1.0, 0.0, 0.0, VariantId::Classical, kSpec, kCfg).norm < 1e-10);
  CHECK(mean_accel_check(1.0, 0.0, 0.0, VariantId::V3, kSpec, kCfg).norm < 1e-3);
  CHECK(mean_accel_check(1.0, 0.0, 0.0, VariantId::V1, kSpec, kCfg).norm < 1e-3);
}

TEST_CASE("divergence of the variant current matches the truncated series") {
  const WignerQuery q{0.8, 0.0, 0.3, 0.5, 1.0, 0.0};
  for (VariantId v : {VariantId::V1, VariantId::V2, VariantId::V3}) {
    CHECK(divergence_consistency(q, v, kSpec, kCfg).residual < 1e-3);
  }
  // Classical drops the l = 1 source, so a remainder is left.
  CHECK(divergence_consistency(q, VariantId::Classical, kSpec, kCfg).residual > 1e-3);
}
