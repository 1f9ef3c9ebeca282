#include <doctest.h>

#include <cmath>
#include <numbers>

#include "funnel/analytic_state.hpp"
#include "funnel/wigner.hpp"

using namespace funnel;

namespace {
const PhysConfig kCfg = reduced_defaults();
const QuadSpec kSpec;
}  // namespace

TEST_CASE("analytic moments closed forms") {
  const MomentSet a = analytic_moments(0.5, 0.0, kCfg);
  CHECK(std::hypot(a.mean_p[0], a.mean_p[1]) == doctest::Approx(2.0));
  CHECK(std::abs(a.mean_p[0]) < 1e-15);
  CHECK(a.mean_p[2] == 0.0);
  const MomentSet b = analytic_moments(1.0, std::numbers::pi / 2.0, kCfg);
  CHECK(b.second_moments[0][0] == doctest::Approx(1.25));
  for (double rho : {0.3, 1.0, 2.5}) {
    const MomentSet m = analytic_moments(rho, 0.7, kCfg, 0.4);
    const double f = density_f1({rho, 0.4, 0.7}, kCfg);
    for (int i = 0; i < 3; ++i) {
      CHECK(m.pressure[i][i] == doctest::Approx(0.25 * f));
      for (int j = 0; j < 3; ++j) {
        if (i != j) CHECK(m.pressure[i][j] == 0.0);
      }
    }
  }
}

TEST_CASE("numeric moments reproduce the closed forms") {
  for (auto [rho, phi] : {std::pair{0.5, 0.0}, std::pair{1.0, std::numbers::pi / 3.0}}) {
    const NumericMoments n =
        numeric_moments(rho, 0.0, phi, kSpec, default_moment_grid(rho, kSpec, kCfg), kCfg);
    const MomentSet a = analytic_moments(rho, phi, kCfg);
    for (int i = 0; i < 3; ++i) {
      CHECK(n.moments.mean_p[i] == doctest::Approx(a.mean_p[i]).epsilon(1e-3).scale(1.0 / rho));
      for (int j = 0; j < 3; ++j) {
        CHECK(n.moments.second_moments[i][j] ==
              doctest::Approx(a.second_moments[i][j]).epsilon(1e-3).scale(a.second_moments[i][i]));
      }
      CHECK(n.moments.pressure[i][i] == doctest::Approx(a.pressure[i][i]).epsilon(1e-3));
    }
  }
}

TEST_CASE("marginal over momentum is the density") {
  const NumericMoments n =
      numeric_moments(1.0, 0.5, 0.2, kSpec, default_moment_grid(1.0, kSpec, kCfg), kCfg);
  CHECK(n.marginal == doctest::Approx(density_f1({1.0, 0.5, 0.2}, kCfg)).epsilon(1e-4));
  CHECK(n.density == doctest::Approx(density_f1({1.0, 0.5, 0.2}, kCfg)));
}

TEST_CASE("grid integrals of second derivatives vanish") {
  const GridIntegrals g =
      grid_integrals(1.0, 0.0, 0.0, kSpec, default_moment_grid(1.0, kSpec, kCfg), kCfg);
  CHECK(g.w == doctest::Approx(density_f1({1.0, 0.0, 0.0}, kCfg)).epsilon(1e-4));
  CHECK(std::abs(g.pxpx) < 1e-4 * g.w);
  CHECK(std::abs(g.pypy) < 1e-4 * g.w);
  CHECK(std::abs(g.pxpy) < 1e-4 * g.w);
}

TEST_CASE("normalisation over phase space") {
  const NormalizationResult full = normalization(kSpec, kCfg);
  CHECK(full.value == doctest::Approx(1.0).epsilon(1e-3));
  NormalizationSpec coarse;
  coarse.n_radial = 12;
  coarse.spacing_factor = 2.0;
  CHECK(std::abs(normalization(kSpec, kCfg, coarse).value - full.value) < 1e-2);
  CHECK(normalization(kSpec, PhysConfig(1.0, 1.0, 2.0)).value == doctest::Approx(1.0).epsilon(1e-3));
}
