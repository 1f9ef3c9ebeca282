#include "funnel/trajectory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "funnel/errors.hpp"
#include "funnel/potential.hpp"

namespace funnel {

void TrajConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("TrajConfig: dt must be positive");
  if (!(t_max > dt) || !std::isfinite(t_max)) throw ConfigError("TrajConfig: t_max must exceed dt");
  if (sample_stride < 1) throw ConfigError("TrajConfig: sample_stride must be >= 1");
  spec.validate();
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::PoleEncounter: return "PoleEncounter";
    case EventKind::RhoMinBreach: return "RhoMinBreach";
    case EventKind::Completed: return "Completed";
  }
  return "?";
}

double classical_energy(const TrajState& s, const PhysConfig& cfg) {
  const double rho = std::hypot(s.x, s.y);
  return (s.px * s.px + s.py * s.py) / (2.0 * cfg.mass()) + potential_u({rho, 0.0, 0.0}, cfg);
}

double angular_momentum(const TrajState& s) { return s.x * s.py - s.y * s.px; }

namespace {

struct Deriv {
  double dx, dy, dpx, dpy;
};

enum class StepStatus { Ok, Pole, RhoMin };

struct Stepper {
  const TrajConfig& tc;
  const PhysConfig& cfg;
  bool clamped = false;
  bool pole_seen = false;
  std::string detail;

  StepStatus rhs(const TrajState& s, Deriv& d) {
    const double rho = std::hypot(s.x, s.y);
    if (!(rho >= kRhoMin)) {
      detail = "rho below rho_min";
      return StepStatus::RhoMin;
    }
    // A step longer than the distance to the axis cannot resolve the pole.
    if (std::hypot(s.px, s.py) / cfg.mass() * tc.dt > rho) {
      detail = "step length exceeds the distance to the axis";
      return StepStatus::RhoMin;
    }
    const double phi = std::atan2(s.y, s.x);
    WignerQuery q;
    q.rho = rho;
    q.phi = phi;
    q.p_rho = s.px * std::cos(phi) + s.py * std::sin(phi);
    q.p_phi = -s.px * std::sin(phi) + s.py * std::cos(phi);
    AccelEval a;
    try {
      a = acceleration_flagged(q, tc.variant, tc.spec, cfg);
    } catch (const DomainError& e) {
      detail = e.what();
      return StepStatus::RhoMin;
    } catch (const AccuracyError& e) {
      detail = e.what();
      return StepStatus::Pole;
    } catch (const NonFiniteError& e) {
      detail = e.what();
      return StepStatus::Pole;
    }
    double ax = a.a_x;
    double ay = a.a_y;
    if (a.pole_flag) {
      pole_seen = true;
      if (tc.pole_policy == PolePolicy::Halt) {
        detail = "|W| below pole threshold";
        return StepStatus::Pole;
      }
      // Cap |correction| at 10 |grad U|/m.
      const double cx0 = ax - a.correction_x;
      const double cy0 = ay - a.correction_y;
      const double cap = 10.0 * std::hypot(cx0, cy0);
      double cx = a.correction_x;
      double cy = a.correction_y;
      const double mag = std::hypot(cx, cy);
      if (!std::isfinite(mag)) {
        cx = cy = 0.0;
      } else if (mag > cap) {
        cx *= cap / mag;
        cy *= cap / mag;
      }
      ax = cx0 + cx;
      ay = cy0 + cy;
      clamped = true;
    }
    const double m = cfg.mass();
    d = {s.px / m, s.py / m, m * ax, m * ay};
    return StepStatus::Ok;
  }
};

TrajState advance(const TrajState& s, const Deriv& d, double h) {
  return {s.t + h, s.x + h * d.dx, s.y + h * d.dy, s.px + h * d.dpx, s.py + h * d.dpy};
}

}  // namespace

Trajectory integrate(const TrajState& init, const TrajConfig& tc, const PhysConfig& cfg) {
  tc.validate();
  Trajectory tr;
  Stepper st{tc, cfg, false, false, {}};
  const bool classical = tc.variant == VariantId::Classical;
  auto record = [&](const TrajState& s) {
    tr.samples.push_back(s);
    if (classical) tr.energy_series.push_back(classical_energy(s, cfg));
  };
  if (!(std::hypot(init.x, init.y) >= kRhoMin)) {
    tr.samples.push_back(init);
    tr.events.push_back({init.t, EventKind::RhoMinBreach, "initial rho below rho_min"});
    return tr;
  }
  record(init);
  const long n_steps = std::lround(std::floor(tc.t_max / tc.dt + 1e-9));
  TrajState s = init;
  const double h = tc.dt;
  for (long i = 1; i <= n_steps; ++i) {
    Deriv k1, k2, k3, k4;
    st.pole_seen = false;
    StepStatus status = st.rhs(s, k1);
    if (status == StepStatus::Ok) status = st.rhs(advance(s, k1, 0.5 * h), k2);
    if (status == StepStatus::Ok) status = st.rhs(advance(s, k2, 0.5 * h), k3);
    if (status == StepStatus::Ok) status = st.rhs(advance(s, k3, h), k4);
    if (status != StepStatus::Ok) {
      if (tr.samples.back().t != s.t) record(s);
      tr.events.push_back(
          {s.t, status == StepStatus::Pole ? EventKind::PoleEncounter : EventKind::RhoMinBreach,
           st.detail});
      tr.non_physical = st.clamped;
      return tr;
    }
    if (st.pole_seen) tr.events.push_back({s.t, EventKind::PoleEncounter, "clamped"});
    TrajState next;
    next.t = init.t + i * h;
    next.x = s.x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    next.y = s.y + h / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
    next.px = s.px + h / 6.0 * (k1.dpx + 2.0 * k2.dpx + 2.0 * k3.dpx + k4.dpx);
    next.py = s.py + h / 6.0 * (k1.dpy + 2.0 * k2.dpy + 2.0 * k3.dpy + k4.dpy);
    s = next;
    if (i % tc.sample_stride == 0 || i == n_steps) record(s);
  }
  tr.events.push_back({s.t, EventKind::Completed, {}});
  tr.non_physical = st.clamped;
  return tr;
}

std::optional<double> divergence_time(const Trajectory& a, const Trajectory& b, double threshold) {
  const std::size_t n = std::min(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < n; ++i) {
    const TrajState& sa = a.samples[i];
    const TrajState& sb = b.samples[i];
    if (std::abs(sa.t - sb.t) > 1e-9 * std::max(1.0, std::abs(sa.t))) {
      throw GridMismatchError("divergence_time: sample " + std::to_string(i) +
                              " has different times in the two trajectories");
    }
    if (std::hypot(sa.x - sb.x, sa.y - sb.y) > threshold) return sa.t;
  }
  return std::nullopt;
}

std::optional<double> radial_period(const Trajectory& tr, double rho0) {
  const std::size_t n = tr.samples.size();
  if (n < 3) return std::nullopt;
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = std::hypot(tr.samples[i].x, tr.samples[i].y);
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  const double band = 1e-6 * std::max(1.0, *hi);
  std::vector<double> marks;
  if (rho0 > *lo + band && rho0 < *hi - band) {
    for (std::size_t i = 1; i < n && marks.size() < 2; ++i) {
      const double a = r[i - 1] - rho0;
      const double b = r[i] - rho0;
      if (a < 0.0 && b >= 0.0) {
        const double f = a / (a - b);
        marks.push_back(tr.samples[i - 1].t + f * (tr.samples[i].t - tr.samples[i - 1].t));
      }
    }
  } else {
    // rho0 is a turning point: successive radial maxima, refined by a parabola.
    for (std::size_t i = 1; i + 1 < n && marks.size() < 2; ++i) {
      if (r[i] > r[i - 1] && r[i] >= r[i + 1]) {
        const double den = r[i - 1] - 2.0 * r[i] + r[i + 1];
        const double off = den != 0.0 ? 0.5 * (r[i - 1] - r[i + 1]) / den : 0.0;
        const double h = tr.samples[i + 1].t - tr.samples[i].t;
        marks.push_back(tr.samples[i].t + off * h);
      }
    }
  }
  if (marks.size() < 2) return std::nullopt;
  return marks[1] - marks[0];
}

TrajState scenario(std::string_view name, const PhysConfig& cfg) {
  const double s = cfg.sigma_r();
  const double p0 = std::sqrt(2.0 * cfg.mass() * energy(cfg));
  TrajState st;
  if (name == "fig3") {
    st.x = 0.5 * s;
    st.py = 3.0 * p0;
  } else if (name == "fig4_micro") {
    st.x = 0.5 * s;
    st.py = 1.641 * p0;
  } else if (name == "fig4_mid") {
    st.x = 2.15 * s;
    st.py = 1.641 * p0;
  } else if (name == "fig4_macro") {
    st.x = 2.5 * s;
    st.py = 1.641 * p0;
  } else {
    throw UnknownScenario("unknown scenario '" + std::string(name) +
                          "' (expected fig3, fig4_micro, fig4_mid, fig4_macro)");
  }
  return st;
}

std::vector<std::string> scenario_names() { return {"fig3", "fig4_micro", "fig4_mid", "fig4_macro"}; }

int default_workers() {
  if (const char* env = std::getenv("FUNNEL_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

std::vector<Trajectory> integrate_batch(const std::vector<TrajJob>& jobs, const PhysConfig& cfg,
                                        int workers) {
  std::vector<Trajectory> out(jobs.size());
  for (const TrajJob& j : jobs) j.tc.validate();
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      out[i] = integrate(jobs[i].init, jobs[i].tc, cfg);
    }
  };
  if (n == 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  for (int i = 0; i < n; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace funnel
