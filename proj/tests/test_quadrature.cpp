#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "funnel/errors.hpp"
#include "funnel/quadrature.hpp"

using namespace funnel;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n - 1 exactly") {
  for (int n : {1, 2, 5, 16, 64}) {
    const Rule r = gauss_legendre(n, -1.0, 2.0);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.w[i] * std::pow(r.x[i], d);
      const double exact = (std::pow(2.0, d + 1) - std::pow(-1.0, d + 1)) / (d + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-12).scale(1.0));
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), ConfigError);
}

TEST_CASE("graded rule still integrates the interval") {
  for (Grading g : {Grading::None, Grading::TowardLower, Grading::TowardUpper}) {
    const Rule r = graded_gauss_legendre(20, 1.0, 3.0, g);
    double s = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * r.x[i] * r.x[i];
    CHECK(s == doctest::Approx(26.0 / 3.0).epsilon(1e-13));
  }
  const Rule lo = graded_gauss_legendre(10, 0.0, 1.0, Grading::TowardLower);
  const Rule plain = gauss_legendre(10, 0.0, 1.0);
  CHECK(lo.x.front() < plain.x.front());
}

TEST_CASE("sine map fixes the quarter points and preserves the period") {
  for (int stages : {0, 1, 2}) {
    for (double psi : {0.0, std::numbers::pi / 2.0, std::numbers::pi}) {
      CHECK(sine_map(psi, stages).first == doctest::Approx(psi).scale(1.0));
    }
    const Rule r = periodic_rule(64, stages);
    double s = 0.0;
    double c2 = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      s += r.w[i];
      c2 += r.w[i] * std::cos(r.x[i]) * std::cos(r.x[i]);
    }
    CHECK(s == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-13));
    CHECK(c2 == doctest::Approx(std::numbers::pi).epsilon(1e-12));
  }
}

TEST_CASE("compensated sums recover cancelled terms") {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
  CompensatedComplexSum c;
  c.add({1e16, -1e16});
  c.add({1.0, 2.0});
  c.add({-1e16, 1e16});
  CHECK(c.value() == std::complex<double>(1.0, 2.0));
}

TEST_CASE("integrate_product on separable integrands") {
  QuadSpec spec;
  spec.u_max = 6.0;
  const QuadResult one = integrate_product(
      [](double, double u) { return std::complex<double>(std::exp(-u * u) * u, 0.0); }, spec);
  CHECK(one.value == doctest::Approx(std::numbers::pi * (1.0 - std::exp(-36.0))).epsilon(1e-12));
  const QuadResult cs = integrate_product(
      [](double a, double u) { return std::complex<double>(std::cos(a) * std::exp(-u * u), 0.0); }, spec);
  CHECK(std::abs(cs.value) < 1e-13);
  const QuadResult im = integrate_product(
      [](double a, double) { return std::complex<double>(1.0, std::sin(a)); }, spec);
  CHECK(im.imag_residual < 1e-12);
}

TEST_CASE("integrate_product failure modes") {
  QuadSpec spec;
  CHECK_THROWS_AS(integrate_product([](double, double) { return std::complex<double>(std::nan(""), 0.0); }, spec),
                  NonFiniteError);
  spec.target_tol = 1e-10;
  // A rapidly oscillating radial factor cannot be resolved by any of the three levels.
  CHECK_THROWS_AS(integrate_product(
                      [](double, double u) { return std::complex<double>(std::cos(400.0 * u) + 2.0, 0.0); },
                      spec),
                  AccuracyError);
  QuadSpec bad;
  bad.n_phi = 15;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = QuadSpec{};
  bad.u_max = 3.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = QuadSpec{};
  bad.target_tol = 0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("rounding floor grows with norm and term count") {
  CHECK(rounding_floor(1.0, 0) == doctest::Approx(16.0 * std::numeric_limits<double>::epsilon()));
  CHECK(rounding_floor(2.0, 99) == doctest::Approx(2.0 * 16.0 * std::numeric_limits<double>::epsilon() * 10.0));
}
