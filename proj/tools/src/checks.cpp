#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "funnel/analytic_state.hpp"
#include "funnel/potential.hpp"
#include "funnel/special_functions.hpp"
#include "funnel_cli/commands.hpp"

namespace funnel::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniform draw in [a, b) from the raw 64-bit stream, portable across standard libraries.
double uniform(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Sizes {
  int parity_queries;
  std::vector<double> moment_rhos;
  std::vector<double> accel_rhos;
  int neg_n_rho;
  int neg_n_pphi;
  bool ordering;
};

Sizes sizes_for(Suite s) {
  if (s == Suite::Full) return {200, {0.5, 1.0, 2.0}, {0.5, 1.0, 2.0}, 40, 60, true};
  return {40, {1.0}, {1.0}, 20, 30, false};
}

CheckResult timed(const std::string& name, const std::function<CheckResult()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.passed = false;
    r.measured = kInf;
    r.detail = std::string("error: ") + e.what();
  }
  r.name = name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

CheckResult verdict(double measured, double tol, std::string detail = {}) {
  CheckResult r;
  r.measured = measured;
  r.tolerance = tol;
  r.passed = measured < tol;
  r.detail = std::move(detail);
  return r;
}

CheckResult hj_identity(const RunConfig& rc) {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double rho = 0.1 + (5.0 - 0.1) * i / 49.0;
      const double z = -5.0 + 10.0 * j / 49.0;
      worst = std::max(worst, std::abs(hj_residual({rho, z, 0.0}, rc.phys)));
    }
  }
  return verdict(worst, 1e-12, "max |hj_residual| on 50x50 grid");
}

CheckResult elliptic_equivalence(const RunConfig& rc) {
  double worst = 0.0;
  for (double rho : {0.3, 0.5, 1.0, 2.0}) {
    for (double z : {0.0, 1.0}) {
      for (double pz : {0.0, 0.5}) {
        WignerQuery q;
        q.rho = rho;
        q.z = z;
        q.p_z = pz;
        const double w = rc.verify.tamper_prefactor * eval(q, rc.quad, rc.phys).w;
        const double a = eval_on_axis(rho, z, pz, rc.quad, rc.phys);
        worst = std::max(worst, std::abs(w - a) / std::abs(a));
      }
    }
  }
  return verdict(worst, 1e-6, "max relative |eval - eval_on_axis| at p_rho = p_phi = 0");
}

CheckResult realness_parity(const RunConfig& rc, int n) {
  std::mt19937_64 rng(20240601);
  double worst_imag = 0.0;
  double worst_parity = 0.0;  // difference / est_error
  for (int i = 0; i < n; ++i) {
    WignerQuery q;
    q.rho = uniform(rng, 0.2, 3.0);
    q.z = uniform(rng, -1.0, 1.0);
    q.phi = uniform(rng, -std::numbers::pi, std::numbers::pi);
    q.p_rho = uniform(rng, -4.0, 4.0);
    q.p_phi = uniform(rng, -4.0, 4.0);
    q.p_z = uniform(rng, -2.0, 2.0);
    const WignerEval e = eval(q, rc.quad, rc.phys);
    WignerQuery qr = q;
    qr.p_rho = -q.p_rho;
    const WignerEval er = eval(qr, rc.quad, rc.phys);
    WignerQuery qz = q;
    qz.p_z = -q.p_z;
    const WignerEval ez = eval(qz, rc.quad, rc.phys);
    worst_imag = std::max(worst_imag, e.imag_residual / std::abs(e.w));
    const double est = e.est_error + er.est_error;
    worst_parity = std::max(worst_parity, std::abs(e.w - er.w) / est);
    worst_parity = std::max(worst_parity, std::abs(e.w - ez.w) / (e.est_error + ez.est_error));
  }
  std::ostringstream d;
  d << "max imag_residual/|w| = " << worst_imag << ", max parity difference / est_error = "
    << worst_parity << " over " << n << " queries";
  CheckResult r = verdict(worst_imag, 1e-8, d.str());
  r.passed = r.passed && worst_parity < 1.0;
  return r;
}

CheckResult marginal_identity(const RunConfig& rc) {
  double worst = 0.0;
  for (double rho : {0.5, 1.0, 2.0}) {
    for (double z : {0.0, 0.7}) {
      const NumericMoments nm =
          numeric_moments(rho, z, 0.4, rc.quad, default_moment_grid(rho, rc.quad, rc.phys), rc.phys);
      worst = std::max(worst, std::abs(nm.marginal / nm.density - 1.0));
    }
  }
  return verdict(worst, 1e-4, "max relative |int W d3p - f1| at 6 points");
}

CheckResult normalization_check(const RunConfig& rc) {
  const NormalizationResult n = normalization(rc.quad, rc.phys);
  return verdict(std::abs(n.value - 1.0), 1e-3, "|int W - 1|");
}

CheckResult moment_oracles(const RunConfig& rc, const std::vector<double>& rhos) {
  double worst = 0.0;
  std::string where;
  auto track = [&](double v, const std::string& what) {
    if (v > worst) {
      worst = v;
      where = what;
    }
  };
  for (double rho : rhos) {
    for (double phi : {0.0, std::numbers::pi / 3.0}) {
      const NumericMoments nm = numeric_moments(
          rho, 0.0, phi, rc.quad, default_moment_grid(rho, rc.quad, rc.phys), rc.phys);
      const MomentSet an = analytic_moments(rho, phi, rc.phys);
      const MomentSet& nu = nm.moments;
      const std::string at = " at rho=" + std::to_string(rho) + " phi=" + std::to_string(phi);
      const double mag_an = std::hypot(an.mean_p[0], an.mean_p[1]);
      const double mag_nu = std::hypot(nu.mean_p[0], nu.mean_p[1]);
      track(std::abs(mag_nu / mag_an - 1.0), "mean magnitude" + at);
      const double radial = nu.mean_p[0] * std::cos(phi) + nu.mean_p[1] * std::sin(phi);
      track(std::hypot(radial, nu.mean_p[2]) / mag_an, "mean non-azimuthal part" + at);
      double diag = 0.0;
      double pdiag = 0.0;
      for (int a = 0; a < 3; ++a) {
        diag = std::max(diag, std::abs(an.second_moments[a][a]));
        pdiag = std::max(pdiag, std::abs(an.pressure[a][a]));
      }
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          const double ref = an.second_moments[a][b];
          const double den = std::abs(ref) > 1e-3 * diag ? std::abs(ref) : diag;
          track(std::abs(nu.second_moments[a][b] - ref) / den, "second moment" + at);
          if (a == b) {
            track(std::abs(nu.pressure[a][a] / an.pressure[a][a] - 1.0), "pressure diagonal" + at);
          } else {
            track(std::abs(nu.pressure[a][b]) / pdiag, "pressure off-diagonal" + at);
          }
        }
      }
    }
  }
  return verdict(worst, 1e-3, "worst: " + where);
}

CheckResult pressure_link(const RunConfig& rc) {
  std::mt19937_64 rng(7);
  const double h = rc.phys.hbar();
  const double m = rc.phys.mass();
  const double s = rc.phys.sigma_r();
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x = uniform(rng, -3.0, 3.0);
    const double y = uniform(rng, -3.0, 3.0);
    const double z = uniform(rng, -3.0, 3.0);
    const double xs[3] = {x, y, z};
    auto at = [](double a, double b, double c) {
      return CylPoint{std::hypot(a, b), c, std::atan2(b, a)};
    };
    const double step = 1e-3;
    for (int mu = 0; mu < 3; ++mu) {
      double e[3] = {0.0, 0.0, 0.0};
      e[mu] = step;
      auto q = [&](double k) {
        return quantum_potential_q(at(x + k * e[0], y + k * e[1], z + k * e[2]), rc.phys);
      };
      auto pmm = [&](double k) {
        const CylPoint p = at(x + k * e[0], y + k * e[1], z + k * e[2]);
        return analytic_moments(p.rho, p.phi, rc.phys, p.z).pressure[mu][mu];
      };
      const double dq = (q(-2) - 8.0 * q(-1) + 8.0 * q(1) - q(2)) / (12.0 * step);
      // Pressure is diagonal, so the row divergence is the derivative of P_mumu along x_mu.
      const double dp = (pmm(-2) - 8.0 * pmm(-1) + 8.0 * pmm(1) - pmm(2)) / (12.0 * step);
      const double f = density_f1(at(x, y, z), rc.phys);
      const double closed = -h * h * xs[mu] / (4.0 * m * s * s * s * s);
      worst = std::max({worst, std::abs(dq - closed), std::abs(m / f * dp - closed)});
    }
  }
  return verdict(worst, 1e-8, "max |grad Q - closed|, |(m/f1) div P - closed| at 20 points");
}

CheckResult mean_accel(const RunConfig& rc, const std::vector<double>& rhos) {
  double worst = 0.0;
  for (double rho : rhos) {
    for (VariantId v : all_variants()) {
      worst = std::max(worst, mean_accel_check(rho, 0.0, 0.0, v, rc.quad, rc.phys).norm);
    }
  }
  return verdict(worst, 1e-3, "max mean-acceleration residual over variants");
}

CheckResult divergence_check(const RunConfig& rc, int n_points) {
  // {rho, z, phi, p_rho, p_phi, p_z}; p_rho != 0 keeps the divergence off its parity zero.
  const WignerQuery candidates[] = {
      {1.0, 0.0, 0.0, 0.4, 1.0, 0.0},  {0.8, 0.0, 0.3, 0.2, 1.1, 0.0},
      {1.3, 0.0, 1.0, -0.3, 0.8, 0.0}, {1.6, 0.0, 2.0, 0.3, 0.6, 0.0},
      {0.6, 0.0, -0.5, 0.1, 1.5, 0.0}, {2.0, 0.0, 0.7, 0.5, 0.5, 0.0},
      {1.1, 0.0, -2.0, 0.5, 0.9, 0.0}, {0.9, 0.0, 2.8, -0.4, 1.2, 0.0},
  };
  double worst = 0.0;
  double worst_pair = 0.0;
  int used = 0;
  for (const WignerQuery& q : candidates) {
    if (used == n_points) break;
    const double w = eval(q, rc.quad, rc.phys).w;
    if (std::abs(w) < 0.05 * w_scale(q.rho, 0.0, 0.0, rc.phys)) continue;
    ++used;
    double lhs[3];
    double scale = 0.0;
    int k = 0;
    for (VariantId v : {VariantId::V1, VariantId::V2, VariantId::V3}) {
      const DivergenceCheck d = divergence_consistency(q, v, rc.quad, rc.phys);
      worst = std::max(worst, d.residual);
      lhs[k++] = d.lhs;
      scale = d.scale;
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        worst_pair = std::max(worst_pair, std::abs(lhs[a] - lhs[b]) / scale);
      }
    }
  }
  std::ostringstream d;
  d << used << " points; pairwise variant difference " << worst_pair;
  CheckResult r = verdict(std::max(worst, worst_pair), 1e-3, d.str());
  r.passed = r.passed && used == n_points;
  return r;
}

CheckResult negativity(const RunConfig& rc, int n_rho, int n_pphi) {
  double lowest = kInf;
  for (int i = 0; i < n_rho; ++i) {
    for (int j = 0; j < n_pphi; ++j) {
      WignerQuery q;
      q.rho = 0.25 + (2.0 - 0.25) * i / (n_rho - 1);
      q.p_phi = -6.0 + 12.0 * j / (n_pphi - 1);
      lowest = std::min(lowest, eval(q, rc.quad, rc.phys).w);
    }
  }
  CheckResult r;
  r.measured = lowest;
  r.tolerance = 0.0;
  r.passed = lowest < 0.0;
  r.detail = "min w over the (rho, p_phi) grid must be negative";
  return r;
}

CheckResult classical_conservation(const RunConfig& rc) {
  TrajConfig tc;
  tc.variant = VariantId::Classical;
  tc.dt = 1e-3;
  tc.t_max = 20.0;
  const TrajState init = scenario("fig3", rc.phys);
  const Trajectory tr = integrate(init, tc, rc.phys);
  const double e0 = classical_energy(init, rc.phys);
  const double l0 = angular_momentum(init);
  double worst = 0.0;
  for (const TrajState& s : tr.samples) {
    worst = std::max(worst, std::abs(classical_energy(s, rc.phys) / e0 - 1.0));
    worst = std::max(worst, std::abs(angular_momentum(s) / l0 - 1.0));
  }
  CheckResult r = verdict(worst, 1e-6, "relative drift of energy and angular momentum");
  r.passed = r.passed && tr.events.back().kind == EventKind::Completed;
  return r;
}

double or_inf(const std::optional<double>& v) { return v ? *v : kInf; }

CheckResult quantum_split(const RunConfig& rc) {
  TrajConfig tc;
  tc.t_max = 1.0;
  tc.spec = rc.quad;
  const TrajState init = scenario("fig3", rc.phys);
  tc.variant = VariantId::Classical;
  const Trajectory c = integrate(init, tc, rc.phys);
  tc.variant = VariantId::V3;
  const Trajectory q = integrate(init, tc, rc.phys);
  const double t = or_inf(divergence_time(c, q, 0.1 * rc.phys.sigma_r()));
  CheckResult r;
  r.measured = t;
  r.tolerance = tc.t_max;
  r.passed = std::isfinite(t);
  r.detail = "fig3 Classical vs V3 divergence time at 0.1 sigma_r within t_max = 1";
  return r;
}

CheckResult micro_macro_ordering(const RunConfig& rc) {
  const double th = 0.1 * rc.phys.sigma_r();
  std::vector<TrajJob> jobs;
  auto job = [&](const std::string& name, VariantId v) {
    TrajJob j;
    j.init = scenario(name, rc.phys);
    j.tc.variant = v;
    j.tc.spec = rc.quad;
    jobs.push_back(j);
  };
  for (VariantId v : all_variants()) job("fig3", v);
  for (const char* n : {"fig4_micro", "fig4_mid", "fig4_macro"}) {
    job(n, VariantId::Classical);
    job(n, VariantId::V3);
  }
  const std::vector<Trajectory> tr = integrate_batch(jobs, rc.phys, default_workers());
  bool fig3_finite = true;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) fig3_finite = fig3_finite && divergence_time(tr[a], tr[b], th);
  }
  const double t_micro = or_inf(divergence_time(tr[4], tr[5], th));
  const double t_mid = or_inf(divergence_time(tr[6], tr[7], th));
  const double t_macro = or_inf(divergence_time(tr[8], tr[9], th));
  const auto period = radial_period(tr[8], scenario("fig4_macro", rc.phys).x);
  const bool quarter = period && t_macro > 0.25 * *period;
  std::ostringstream d;
  d << "divergence times micro " << t_micro << ", mid " << t_mid << ", macro " << t_macro
    << "; macro radial period " << (period ? *period : kInf) << "; fig3 pairs finite "
    << (fig3_finite ? "yes" : "no");
  CheckResult r;
  r.measured = t_macro;
  r.tolerance = period ? 0.25 * *period : kInf;
  r.passed = t_macro > t_mid && t_mid > t_micro && fig3_finite && quarter;
  r.detail = d.str();
  return r;
}

CheckResult scale_monotonicity(const RunConfig& rc) {
  std::vector<double> rho;
  for (int i = 0; i < 200; ++i) rho.push_back(0.3 + (5.0 - 0.3) * i / 199.0);
  const std::vector<ScaleRow> rows = scale_report(rho, rc.phys);
  int violations = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) violations += rows[i].ratio >= rows[i - 1].ratio;
  CheckResult r = verdict(violations, 1.0, "non-decreasing steps of the ratio over [0.3, 5]");
  return r;
}

CheckResult elliptic_k_quadrature(const RunConfig&) {
  double worst = 0.0;
  for (double k1 : {0.1, 0.5, 1.0, 3.0, 10.0, 100.0}) {
    // K(i k1) = int_0^{pi/2} d t / sqrt(1 + k1^2 sin^2 t), Gauss-Legendre with 200 nodes.
    const Rule r = gauss_legendre(200, 0.0, std::numbers::pi / 2.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      const double s = std::sin(r.x[i]);
      sum += r.w[i] / std::sqrt(1.0 + k1 * k1 * s * s);
    }
    worst = std::max(worst, std::abs(elliptic_k_imag(k1) / sum - 1.0));
  }
  return verdict(worst, 1e-12, "K(i k1) by AGM against direct quadrature");
}

}  // namespace

std::vector<CheckResult> run_checks(const RunConfig& rc) {
  const Sizes sz = sizes_for(rc.verify.suite);
  std::vector<CheckResult> out;
  out.push_back(timed("hj_identity", [&] { return hj_identity(rc); }));
  out.push_back(timed("elliptic_equivalence", [&] { return elliptic_equivalence(rc); }));
  out.push_back(timed("elliptic_k_quadrature", [&] { return elliptic_k_quadrature(rc); }));
  out.push_back(timed("wigner_realness_parity",
                      [&] { return realness_parity(rc, sz.parity_queries); }));
  out.push_back(timed("marginal_identity", [&] { return marginal_identity(rc); }));
  out.push_back(timed("normalization", [&] { return normalization_check(rc); }));
  out.push_back(timed("moment_oracles", [&] { return moment_oracles(rc, sz.moment_rhos); }));
  out.push_back(timed("pressure_link", [&] { return pressure_link(rc); }));
  out.push_back(timed("mean_acceleration", [&] { return mean_accel(rc, sz.accel_rhos); }));
  out.push_back(timed("divergence_consistency", [&] { return divergence_check(rc, 5); }));
  out.push_back(timed("wigner_negativity",
                      [&] { return negativity(rc, sz.neg_n_rho, sz.neg_n_pphi); }));
  out.push_back(timed("classical_conservation", [&] { return classical_conservation(rc); }));
  out.push_back(timed("quantum_split", [&] { return quantum_split(rc); }));
  if (sz.ordering) {
    out.push_back(timed("micro_macro_ordering", [&] { return micro_macro_ordering(rc); }));
  }
  out.push_back(timed("scale_monotonicity", [&] { return scale_monotonicity(rc); }));
  return out;
}

}  // namespace funnel::cli
