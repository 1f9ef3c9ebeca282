#include <doctest.h>

#include <cmath>
#include <numbers>

#include "funnel/errors.hpp"
#include "funnel/potential.hpp"
#include "funnel/trajectory.hpp"

using namespace funnel;

namespace {

const PhysConfig kCfg = reduced_defaults();

Trajectory straight(double offset, int n, double dt) {
  Trajectory t;
  for (int i = 0; i < n; ++i) t.samples.push_back({i * dt, 1.0 + offset * i, 0.0, 0.0, 0.0});
  return t;
}

double max_separation(const Trajectory& a, const Trajectory& b) {
  double m = 0.0;
  const std::size_t n = std::min(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < n; ++i) {
    m = std::max(m, std::hypot(a.samples[i].x - b.samples[i].x, a.samples[i].y - b.samples[i].y));
  }
  return m;
}

}  // namespace

TEST_CASE("scenario presets") {
  const double p0 = std::sqrt(1.5);
  const TrajState f3 = scenario("fig3", kCfg);
  CHECK(f3.x == 0.5);
  CHECK(f3.y == 0.0);
  CHECK(f3.px == 0.0);
  CHECK(f3.py == doctest::Approx(3.674235).epsilon(1e-6));
  CHECK(scenario("fig4_macro", kCfg).x == 2.5);
  CHECK(scenario("fig4_macro", kCfg).py == doctest::Approx(1.641 * p0));
  CHECK(scenario("fig4_macro", kCfg).py == doctest::Approx(2.0098064).epsilon(1e-7));
  CHECK(scenario("fig4_mid", kCfg).x == 2.15);
  CHECK(scenario("fig4_micro", kCfg).x == 0.5);
  CHECK(scenario("fig3", PhysConfig(1.0, 1.0, 2.0)).x == 1.0);
  CHECK_THROWS_AS(scenario("nope", kCfg), UnknownScenario);
  CHECK(scenario_names().size() == 4);
}

TEST_CASE("classical energy and angular momentum") {
  // 3^2 (3/2)/2 + ((1/4) - 16)/8.
  CHECK(classical_energy(scenario("fig3", kCfg), kCfg) == doctest::Approx(4.78125).epsilon(1e-15));
  CHECK(std::abs(classical_energy({0.0, std::sqrt(2.0), 0.0, 0.0, 0.0}, kCfg)) < 1e-15);
  CHECK(angular_momentum({0.0, 1.0, 2.0, 3.0, 4.0}) == doctest::Approx(1.0 * 4.0 - 2.0 * 3.0));
  CHECK_THROWS_AS(classical_energy({0.0, 0.0, 0.0, 1.0, 0.0}, kCfg), DomainError);
}

TEST_CASE("RK4 conserves classical invariants") {
  TrajConfig tc;
  tc.dt = 1e-4;
  tc.t_max = 20.0;
  tc.sample_stride = 100;
  const TrajState init = scenario("fig3", kCfg);
  const Trajectory tr = integrate(init, tc, kCfg);
  REQUIRE(tr.events.back().kind == EventKind::Completed);
  CHECK(tr.samples.back().t == doctest::Approx(20.0));
  const double e0 = classical_energy(init, kCfg);
  for (const TrajState& s : tr.samples) {
    CHECK(std::abs(classical_energy(s, kCfg) / e0 - 1.0) < 1e-8);
    CHECK(std::abs(angular_momentum(s) / angular_momentum(init) - 1.0) < 1e-8);
  }
  CHECK(tr.energy_series.size() == tr.samples.size());
  CHECK_FALSE(tr.non_physical);
}

TEST_CASE("radial period of the isotropic oscillator with inverse-square term") {
  // rho^2 oscillates at twice the harmonic frequency 1/2, independent of energy.
  TrajConfig tc;
  tc.t_max = 15.0;
  for (const char* n : {"fig3", "fig4_mid", "fig4_macro"}) {
    const TrajState init = scenario(n, kCfg);
    const auto p = radial_period(integrate(init, tc, kCfg), init.x);
    REQUIRE(p.has_value());
    CHECK(*p == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-5));
  }
}

TEST_CASE("falling onto the axis ends the run") {
  TrajConfig tc;
  tc.t_max = 5.0;
  const Trajectory tr = integrate({0.0, 0.5, 0.0, -1.0, 0.0}, tc, kCfg);
  CHECK(tr.events.back().kind == EventKind::RhoMinBreach);
  CHECK(tr.samples.back().t < 0.2);
  CHECK(std::hypot(tr.samples.back().x, tr.samples.back().y) < 0.5);
  CHECK(integrate({0.0, 0.0, 0.0, 1.0, 0.0}, tc, kCfg).events.back().kind == EventKind::RhoMinBreach);
}

TEST_CASE("divergence time") {
  const Trajectory a = straight(0.0, 100, 0.1);
  CHECK_FALSE(divergence_time(a, a, 1e-12).has_value());
  const Trajectory b = straight(0.01, 100, 0.1);
  // Separation 0.01 i first exceeds 0.25 at i = 26.
  const auto t = divergence_time(a, b, 0.25);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(2.6));
  CHECK_FALSE(divergence_time(a, b, 10.0).has_value());
  CHECK_THROWS_AS(divergence_time(a, straight(0.0, 100, 0.2), 0.1), GridMismatchError);
}

TEST_CASE("invalid trajectory settings") {
  TrajConfig tc;
  tc.dt = 0.0;
  CHECK_THROWS_AS(tc.validate(), ConfigError);
  tc = TrajConfig{};
  tc.t_max = tc.dt / 2.0;
  CHECK_THROWS_AS(tc.validate(), ConfigError);
  tc = TrajConfig{};
  tc.sample_stride = 0;
  CHECK_THROWS_AS(integrate(scenario("fig3", kCfg), tc, kCfg), ConfigError);
}

TEST_CASE("quantum variants separate more at small radius") {
  std::vector<TrajJob> jobs;
  for (const char* n : {"fig3", "fig4_macro"}) {
    for (VariantId v : all_variants()) {
      TrajJob j;
      j.init = scenario(n, kCfg);
      j.tc.variant = v;
      j.tc.t_max = 0.3;
      jobs.push_back(j);
    }
  }
  const auto tr = integrate_batch(jobs, kCfg, 2);
  double small = 0.0;
  double large = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      small = std::max(small, max_separation(tr[a], tr[b]));
      large = std::max(large, max_separation(tr[4 + a], tr[4 + b]));
    }
  }
  for (const auto& t : tr) CHECK(t.events.back().kind == EventKind::Completed);
  CHECK(large < small);
  CHECK(small > 0.0);
}

TEST_CASE("batch integration is deterministic and matches serial runs") {
  std::vector<TrajJob> jobs(3);
  for (auto& j : jobs) {
    j.init = scenario("fig3", kCfg);
    j.tc.t_max = 0.02;
  }
  jobs[1].tc.variant = VariantId::V3;
  jobs[2].tc.variant = VariantId::V1;
  const auto par = integrate_batch(jobs, kCfg, 3);
  const auto ser = integrate_batch(jobs, kCfg, 1);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Trajectory one = integrate(jobs[i].init, jobs[i].tc, kCfg);
    REQUIRE(par[i].samples.size() == one.samples.size());
    for (std::size_t k = 0; k < one.samples.size(); ++k) {
      CHECK(par[i].samples[k].x == one.samples[k].x);
      CHECK(par[i].samples[k].py == one.samples[k].py);
      CHECK(ser[i].samples[k].y == one.samples[k].y);
    }
  }
  CHECK(default_workers() >= 1);
}

TEST_CASE("event names") {
  CHECK(to_string(EventKind::PoleEncounter) == "PoleEncounter");
  CHECK(to_string(EventKind::RhoMinBreach) == "RhoMinBreach");
  CHECK(to_string(EventKind::Completed) == "Completed");
}
