#include "funnel_cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "format.hpp"
#include "funnel_cli/output.hpp"

#ifndef FUNNEL_VERSION
#define FUNNEL_VERSION "0.0.0"
#endif

namespace funnel::cli {

namespace {

using nlohmann::ordered_json;

// A negative wall time is left out so the document stays reproducible.
ordered_json metadata(const RunConfig& rc, double wall_s) {
  ordered_json m;
  m["version"] = FUNNEL_VERSION;
  m["command"] = to_string(rc.command);
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : rc.echo()) cfg[k] = v;
  m["config"] = cfg;
  if (wall_s >= 0.0) m["wall_time_s"] = wall_s;
  return m;
}

std::string json_text(const ordered_json& j) { return j.dump(2) + "\n"; }

// Metadata next to a CSV file; skipped for standard output.
void write_sidecar(const std::string& csv_path, const RunConfig& rc, double wall_s) {
  if (csv_path.empty()) return;
  write_atomic(csv_path + ".meta.json", json_text(metadata(rc, wall_s)));
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}


}  // namespace

SliceTable wigner_slice(const RunConfig& rc) {
  const SliceParams& s = rc.slice;
  SliceTable t;
  switch (s.plane) {
    case Plane::ZPz: t.axis1_name = "z", t.axis2_name = "p_z"; break;
    case Plane::RhoPrho: t.axis1_name = "rho", t.axis2_name = "p_rho"; break;
    case Plane::RhoPphi: t.axis1_name = "rho", t.axis2_name = "p_phi"; break;
  }
  const std::vector<double> a1 = linspace(s.min1, s.max1, s.n1);
  const std::vector<double> a2 = linspace(s.min2, s.max2, s.n2);
  const std::size_t n = a1.size() * a2.size();
  t.axis1.resize(n);
  t.axis2.resize(n);
  t.w.resize(n);
  t.est_error.resize(n);
  auto cell = [&](std::size_t k) {
    const double x1 = a1[k / a2.size()];
    const double x2 = a2[k % a2.size()];
    WignerQuery q;
    q.phi = s.phi;
    switch (s.plane) {
      case Plane::ZPz: q.rho = s.rho, q.z = x1, q.p_z = x2; break;
      case Plane::RhoPrho: q.rho = x1, q.p_rho = x2; break;
      case Plane::RhoPphi: q.rho = x1, q.p_phi = x2; break;
    }
    const WignerEval e = eval(q, rc.quad, rc.phys, s.branch);
    t.axis1[k] = x1;
    t.axis2[k] = x2;
    t.w[k] = e.w;
    t.est_error[k] = e.est_error;
  };
  const int workers = std::max(1, std::min<int>(default_workers(), static_cast<int>(n)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto work = [&]() {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        cell(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return t;
}

std::string render_slice(const SliceTable& t, const RunConfig& rc, Format f, double wall_s) {
  if (f == Format::Json) {
    ordered_json j;
    j["metadata"] = metadata(rc, wall_s);
    j["axis1_name"] = t.axis1_name;
    j["axis2_name"] = t.axis2_name;
    j["axis1"] = t.axis1;
    j["axis2"] = t.axis2;
    j["w"] = t.w;
    j["est_error"] = t.est_error;
    return json_text(j);
  }
  std::ostringstream os;
  os << "axis1,axis2,w,est_error\n";
  for (std::size_t k = 0; k < t.w.size(); ++k) {
    os << fmt17(t.axis1[k]) << ',' << fmt17(t.axis2[k]) << ',' << fmt17(t.w[k]) << ','
       << fmt17(t.est_error[k]) << '\n';
  }
  return os.str();
}

std::string render_checks(const std::vector<CheckResult>& c, const RunConfig& rc, Format f,
                          double wall_s) {
  bool all = true;
  for (const auto& r : c) all = all && r.passed;
  if (f == Format::Json) {
    ordered_json j;
    j["metadata"] = metadata(rc, wall_s);
    j["all_passed"] = all;
    ordered_json arr = ordered_json::array();
    for (const auto& r : c) {
      ordered_json e;
      e["name"] = r.name;
      e["passed"] = r.passed;
      e["measured"] = r.measured;
      e["tolerance"] = r.tolerance;
      e["detail"] = r.detail;
      e["seconds"] = r.seconds;
      arr.push_back(e);
    }
    j["checks"] = arr;
    return json_text(j);
  }
  std::ostringstream os;
  os << "name,passed,measured,tolerance,seconds\n";
  for (const auto& r : c) {
    os << r.name << ',' << (r.passed ? "true" : "false") << ',' << fmt17(r.measured) << ','
       << fmt17(r.tolerance) << ',' << fmt17(r.seconds) << '\n';
  }
  return os.str();
}

std::vector<TrajRun> run_trajectories(const RunConfig& rc) {
  std::vector<TrajJob> jobs;
  std::vector<TrajRun> runs;
  for (const std::string& name : rc.traj.scenarios) {
    const TrajState init = scenario(name, rc.phys);
    for (VariantId v : rc.traj.variants) {
      TrajJob j;
      j.init = init;
      j.tc.variant = v;
      j.tc.dt = rc.traj.dt;
      j.tc.t_max = rc.traj.t_max;
      j.tc.pole_policy = rc.traj.pole_policy;
      j.tc.spec = rc.quad;
      j.tc.sample_stride = rc.traj.sample_stride;
      jobs.push_back(j);
      runs.push_back({name, v, {}});
    }
  }
  std::vector<Trajectory> out = integrate_batch(jobs, rc.phys, default_workers());
  for (std::size_t i = 0; i < runs.size(); ++i) runs[i].trajectory = std::move(out[i]);
  return runs;
}

std::string render_trajectory(const TrajRun& r, Format f, const RunConfig& rc) {
  const Trajectory& tr = r.trajectory;
  const bool classical = r.variant == VariantId::Classical;
  const std::string terminal =
      tr.events.empty() ? "" : std::string(to_string(tr.events.back().kind));
  auto rho = [](const TrajState& s) { return std::hypot(s.x, s.y); };
  if (f == Format::Json) {
    ordered_json j;
    j["metadata"] = metadata(rc, 0.0);
    j["scenario"] = r.scenario;
    j["variant"] = std::string(to_string(r.variant));
    j["non_physical"] = tr.non_physical;
    ordered_json cols;
    std::vector<double> t, x, y, px, py, rr;
    for (const auto& s : tr.samples) {
      t.push_back(s.t), x.push_back(s.x), y.push_back(s.y);
      px.push_back(s.px), py.push_back(s.py), rr.push_back(rho(s));
    }
    cols["t"] = t;
    cols["x"] = x;
    cols["y"] = y;
    cols["px"] = px;
    cols["py"] = py;
    cols["rho"] = rr;
    if (classical) {
      cols["energy_cl"] = tr.energy_series;
    } else {
      cols["energy_cl"] = nullptr;
    }
    j["columns"] = cols;
    ordered_json ev = ordered_json::array();
    for (const auto& e : tr.events) {
      ev.push_back({{"t", e.t}, {"kind", std::string(to_string(e.kind))}, {"detail", e.detail}});
    }
    j["events"] = ev;
    return json_text(j);
  }
  std::ostringstream os;
  os << "t,x,y,px,py,rho,energy_cl,event\n";
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const TrajState& s = tr.samples[i];
    os << fmt17(s.t) << ',' << fmt17(s.x) << ',' << fmt17(s.y) << ',' << fmt17(s.px) << ','
       << fmt17(s.py) << ',' << fmt17(rho(s)) << ',';
    if (classical && i < tr.energy_series.size()) os << fmt17(tr.energy_series[i]);
    os << ',';
    if (i + 1 == tr.samples.size()) os << terminal;
    os << '\n';
  }
  return os.str();
}

std::string render_traj_summary(const std::vector<TrajRun>& runs, const RunConfig& rc) {
  ordered_json j;
  j["metadata"] = metadata(rc, -1.0);
  const double sigma = rc.phys.sigma_r();
  ordered_json scen = ordered_json::object();
  for (const std::string& name : rc.traj.scenarios) {
    std::vector<const TrajRun*> mine;
    for (const auto& r : runs) {
      if (r.scenario == name) mine.push_back(&r);
    }
    ordered_json s;
    const TrajState init = scenario(name, rc.phys);
    std::optional<double> period;
    for (const TrajRun* r : mine) {
      if (r->variant == VariantId::Classical) {
        period = radial_period(r->trajectory, std::hypot(init.x, init.y));
      }
    }
    s["radial_period"] = period ? ordered_json(*period) : ordered_json(nullptr);
    ordered_json info = ordered_json::object();
    for (const TrajRun* r : mine) {
      const Trajectory& tr = r->trajectory;
      ordered_json e;
      e["terminal_event"] = std::string(to_string(tr.events.back().kind));
      e["t_end"] = tr.events.back().t;
      e["detail"] = tr.events.back().detail;
      e["samples"] = tr.samples.size();
      e["non_physical"] = tr.non_physical;
      info[std::string(to_string(r->variant))] = e;
    }
    s["runs"] = info;
    ordered_json div = ordered_json::object();
    for (const auto& [label, th] : {std::pair{"0.05", 0.05}, {"0.1", 0.1}, {"0.2", 0.2}}) {
      ordered_json m = ordered_json::object();
      for (std::size_t a = 0; a < mine.size(); ++a) {
        for (std::size_t b = a + 1; b < mine.size(); ++b) {
          const auto d = divergence_time(mine[a]->trajectory, mine[b]->trajectory, th * sigma);
          m[std::string(to_string(mine[a]->variant)) + "-" +
            std::string(to_string(mine[b]->variant))] =
              d ? ordered_json(*d) : ordered_json(nullptr);
        }
      }
      div[label] = m;
    }
    s["divergence_time"] = div;
    s["threshold_unit"] = "sigma_r";
    scen[name] = s;
  }
  j["scenarios"] = scen;
  return json_text(j);
}

std::string render_scales(const std::vector<ScaleRow>& rows, const RunConfig& rc, Format f,
                          double wall_s) {
  if (f == Format::Json) {
    ordered_json j;
    j["metadata"] = metadata(rc, wall_s);
    std::vector<double> rho, cf, cs, ratio;
    for (const auto& r : rows) {
      rho.push_back(r.rho), cf.push_back(r.classical_force);
      cs.push_back(r.correction_scale), ratio.push_back(r.ratio);
    }
    j["rho"] = rho;
    j["classical_force"] = cf;
    j["correction_scale"] = cs;
    j["ratio"] = ratio;
    return json_text(j);
  }
  std::ostringstream os;
  os << "rho,classical_force,correction_scale,ratio\n";
  for (const auto& r : rows) {
    os << fmt17(r.rho) << ',' << fmt17(r.classical_force) << ',' << fmt17(r.correction_scale)
       << ',' << fmt17(r.ratio) << '\n';
  }
  return os.str();
}

namespace {

int execute(const RunConfig& rc) {
  const auto t0 = std::chrono::steady_clock::now();
  switch (rc.command) {
    case Command::WignerSlice: {
      const SliceTable t = wigner_slice(rc);
      const double wall = seconds_since(t0);
      write_atomic(rc.out, render_slice(t, rc, rc.format, wall));
      if (rc.format == Format::Csv) write_sidecar(rc.out, rc, wall);
      return kExitOk;
    }
    case Command::Verify: {
      const std::vector<CheckResult> checks = run_checks(rc);
      const double wall = seconds_since(t0);
      write_atomic(rc.out, render_checks(checks, rc, rc.format, wall));
      if (rc.format == Format::Csv) write_sidecar(rc.out, rc, wall);
      bool all = true;
      for (const auto& c : checks) all = all && c.passed;
      return all ? kExitOk : kExitCheckFailed;
    }
    case Command::Traj: {
      namespace fs = std::filesystem;
      const fs::path dir = rc.out.empty() ? fs::path(".") : fs::path(rc.out);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (!fs::is_directory(dir)) {
        throw ConfigError("traj output '" + dir.string() + "' is not a directory");
      }
      const std::vector<TrajRun> runs = run_trajectories(rc);
      const char* ext = rc.format == Format::Csv ? ".csv" : ".json";
      for (const auto& r : runs) {
        const fs::path p = dir / (r.scenario + "_" + std::string(to_string(r.variant)) + ext);
        write_atomic(p.string(), render_trajectory(r, rc.format, rc));
      }
      write_atomic((dir / "summary.json").string(), render_traj_summary(runs, rc));
      std::cerr << "traj: " << runs.size() << " runs in " << seconds_since(t0) << " s\n";
      return kExitOk;
    }
    case Command::Scales: {
      const std::vector<double> rho =
          linspace(rc.scales.rho_min, rc.scales.rho_max, rc.scales.n);
      const std::vector<ScaleRow> rows = scale_report(rho, rc.phys);
      const double wall = seconds_since(t0);
      write_atomic(rc.out, render_scales(rows, rc, rc.format, wall));
      if (rc.format == Format::Csv) write_sidecar(rc.out, rc, wall);
      return kExitOk;
    }
  }
  return kExitConfig;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Wigner-function dynamics in the funnel potential"};
  app.require_subcommand(1);
  struct Args {
    std::string config;
    std::string out;
    std::string format = "csv";
    std::vector<std::string> overrides;
  };
  Args args;
  const std::pair<const char*, const char*> commands[] = {
      {"wigner-slice", "Tabulate W over a two-dimensional phase-space plane"},
      {"verify", "Run the verification suite"},
      {"traj", "Integrate trajectories for scenarios and variants"},
      {"scales", "Print the correction-to-classical scale report"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "Key-value config document")->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "Output path (directory for traj)");
    sub->add_option("--format", args.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("overrides", args.overrides, "section.key=value overrides");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  try {
    const Command cmd = command_from_string(app.get_subcommands().front()->get_name());
    RunConfig rc = load_config(cmd, args.config, args.overrides);
    rc.out = args.out;
    rc.format = args.format == "json" ? Format::Json : Format::Csv;
    return execute(rc);
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy error: " << e.what() << '\n';
    return kExitAccuracy;
  } catch (const NonFiniteError& e) {
    std::cerr << "non-finite result: " << e.what() << '\n';
    return kExitAccuracy;
  } catch (const PoleError& e) {
    std::cerr << "pole error: " << e.what() << '\n';
    return kExitAccuracy;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace funnel::cli
