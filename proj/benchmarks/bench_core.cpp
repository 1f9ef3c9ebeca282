#include <benchmark/benchmark.h>

#include <cmath>

#include "funnel/moyal_accel.hpp"
#include "funnel/special_functions.hpp"
#include "funnel/trajectory.hpp"
#include "funnel/wigner.hpp"

using namespace funnel;

namespace {

const PhysConfig kCfg = reduced_defaults();

void bm_elliptic_k_imag(benchmark::State& st) {
  double k1 = 0.3;
  for (auto _ : st) {
    benchmark::DoNotOptimize(elliptic_k_imag(k1));
    k1 += 1e-9;
  }
}
BENCHMARK(bm_elliptic_k_imag);

void bm_eval(benchmark::State& st) {
  const double p = static_cast<double>(st.range(0));
  const WignerQuery q{0.9, 0.0, 0.4, 0.3 * p, p, 0.0};
  const QuadSpec spec;
  for (auto _ : st) benchmark::DoNotOptimize(eval(q, spec, kCfg).w);
}
BENCHMARK(bm_eval)->Arg(0)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

void bm_eval_on_axis(benchmark::State& st) {
  const QuadSpec spec;
  for (auto _ : st) benchmark::DoNotOptimize(eval_on_axis(0.7, 0.0, 0.0, spec, kCfg));
}
BENCHMARK(bm_eval_on_axis)->Unit(benchmark::kMicrosecond);

void bm_acceleration_v3(benchmark::State& st) {
  const QuadSpec spec;
  const WignerQuery q{0.5, 0.0, 0.0, 0.0, 3.0 * std::sqrt(1.5), 0.0};
  for (auto _ : st) benchmark::DoNotOptimize(acceleration(q, VariantId::V3, spec, kCfg).a_x);
}
BENCHMARK(bm_acceleration_v3)->Unit(benchmark::kMillisecond);

void bm_numeric_moments(benchmark::State& st) {
  const double rho = static_cast<double>(st.range(0)) / 10.0;
  const QuadSpec spec;
  const MomentGrid g = default_moment_grid(rho, spec, kCfg);
  for (auto _ : st) benchmark::DoNotOptimize(numeric_moments(rho, 0.0, 0.0, spec, g, kCfg).marginal);
}
BENCHMARK(bm_numeric_moments)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void bm_classical_trajectory(benchmark::State& st) {
  TrajConfig tc;
  tc.t_max = 1.0;
  const TrajState init = scenario("fig3", kCfg);
  for (auto _ : st) benchmark::DoNotOptimize(integrate(init, tc, kCfg).samples.size());
}
BENCHMARK(bm_classical_trajectory)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
