#include "funnel_cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <system_error>

#include "format.hpp"

namespace funnel::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': '" + raw + "' is not a number");
  }
  return out;
}

int parse_int(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  int out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': '" + raw + "' is not an integer");
  }
  return out;
}

std::vector<std::string> parse_list(const std::string& raw) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : raw + ",") {
    if (c == ',') {
      const std::string t = trim(cur);
      if (!t.empty()) out.push_back(t);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

// Mutable view while loading; physical constants are collected before PhysConfig is built.
struct Draft {
  RunConfig rc;
  double hbar = 1.0;
  double mass = 1.0;
  double sigma_r = 1.0;
};

struct KeyDef {
  std::function<void(Draft&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::map<std::string, KeyDef>& schema() {
  static const std::map<std::string, KeyDef> s = [] {
    std::map<std::string, KeyDef> m;
    auto num = [&m](const std::string& key, double Draft::*dfield,
                    std::function<double(const RunConfig&)> get) {
      m[key] = {[key, dfield](Draft& d, const std::string& v) { d.*dfield = parse_double(key, v); },
                [get](const RunConfig& rc) { return fmt17(get(rc)); }};
    };
    num("phys.hbar", &Draft::hbar, [](const RunConfig& rc) { return rc.phys.hbar(); });
    num("phys.mass", &Draft::mass, [](const RunConfig& rc) { return rc.phys.mass(); });
    num("phys.sigma_r", &Draft::sigma_r, [](const RunConfig& rc) { return rc.phys.sigma_r(); });

    // Field accessors on RunConfig sub-structures.
    auto dbl = [&m](const std::string& key, std::function<double&(RunConfig&)> f) {
      m[key] = {[key, f](Draft& d, const std::string& v) { f(d.rc) = parse_double(key, v); },
                [f](const RunConfig& rc) { return fmt17(f(const_cast<RunConfig&>(rc))); }};
    };
    auto integer = [&m](const std::string& key, std::function<int&(RunConfig&)> f) {
      m[key] = {[key, f](Draft& d, const std::string& v) { f(d.rc) = parse_int(key, v); },
                [f](const RunConfig& rc) { return std::to_string(f(const_cast<RunConfig&>(rc))); }};
    };
    integer("quad.n_phi", [](RunConfig& rc) -> int& { return rc.quad.n_phi; });
    integer("quad.n_rho", [](RunConfig& rc) -> int& { return rc.quad.n_rho; });
    dbl("quad.u_max", [](RunConfig& rc) -> double& { return rc.quad.u_max; });
    dbl("quad.target_tol", [](RunConfig& rc) -> double& { return rc.quad.target_tol; });

    m["wigner-slice.plane"] = {
        [](Draft& d, const std::string& v) {
          const std::string p = lower(trim(v));
          if (p == "z-pz") {
            d.rc.slice.plane = Plane::ZPz;
          } else if (p == "rho-prho") {
            d.rc.slice.plane = Plane::RhoPrho;
          } else if (p == "rho-pphi") {
            d.rc.slice.plane = Plane::RhoPphi;
          } else {
            throw ConfigError("config key 'wigner-slice.plane': '" + v +
                              "' is not one of z-pz, rho-prho, rho-pphi");
          }
        },
        [](const RunConfig& rc) { return to_string(rc.slice.plane); }};
    integer("wigner-slice.n1", [](RunConfig& rc) -> int& { return rc.slice.n1; });
    integer("wigner-slice.n2", [](RunConfig& rc) -> int& { return rc.slice.n2; });
    dbl("wigner-slice.min1", [](RunConfig& rc) -> double& { return rc.slice.min1; });
    dbl("wigner-slice.max1", [](RunConfig& rc) -> double& { return rc.slice.max1; });
    dbl("wigner-slice.min2", [](RunConfig& rc) -> double& { return rc.slice.min2; });
    dbl("wigner-slice.max2", [](RunConfig& rc) -> double& { return rc.slice.max2; });
    dbl("wigner-slice.rho", [](RunConfig& rc) -> double& { return rc.slice.rho; });
    dbl("wigner-slice.phi", [](RunConfig& rc) -> double& { return rc.slice.phi; });
    m["wigner-slice.branch"] = {
        [](Draft& d, const std::string& v) {
          const std::string b = lower(trim(v));
          if (b == "exact") {
            d.rc.slice.branch = PhaseBranch::Exact;
          } else if (b == "literal") {
            d.rc.slice.branch = PhaseBranch::Literal;
          } else {
            throw ConfigError("config key 'wigner-slice.branch': '" + v +
                              "' is not one of exact, literal");
          }
        },
        [](const RunConfig& rc) {
          return std::string(rc.slice.branch == PhaseBranch::Exact ? "exact" : "literal");
        }};

    m["traj.scenarios"] = {
        [](Draft& d, const std::string& v) {
          std::vector<std::string> names = parse_list(v);
          if (names.size() == 1 && lower(names[0]) == "all") names = scenario_names();
          if (names.empty()) throw ConfigError("config key 'traj.scenarios': list is empty");
          for (const auto& n : names) {
            try {
              scenario(n, reduced_defaults());
            } catch (const UnknownScenario& e) {
              throw ConfigError(std::string("config key 'traj.scenarios': ") + e.what());
            }
          }
          d.rc.traj.scenarios = names;
        },
        [](const RunConfig& rc) { return join(rc.traj.scenarios); }};
    m["traj.variants"] = {
        [](Draft& d, const std::string& v) {
          std::vector<VariantId> vs;
          const std::vector<std::string> names = parse_list(v);
          if (names.size() == 1 && lower(names[0]) == "all") {
            vs = all_variants();
          } else {
            for (const auto& n : names) vs.push_back(variant_from_string(n));
          }
          if (vs.empty()) throw ConfigError("config key 'traj.variants': list is empty");
          d.rc.traj.variants = vs;
        },
        [](const RunConfig& rc) {
          std::vector<std::string> names;
          for (VariantId v : rc.traj.variants) names.emplace_back(to_string(v));
          return join(names);
        }};
    dbl("traj.dt", [](RunConfig& rc) -> double& { return rc.traj.dt; });
    dbl("traj.t_max", [](RunConfig& rc) -> double& { return rc.traj.t_max; });
    integer("traj.sample_stride", [](RunConfig& rc) -> int& { return rc.traj.sample_stride; });
    m["traj.pole_policy"] = {
        [](Draft& d, const std::string& v) {
          const std::string p = lower(trim(v));
          if (p == "halt") {
            d.rc.traj.pole_policy = PolePolicy::Halt;
          } else if (p == "clamp") {
            d.rc.traj.pole_policy = PolePolicy::Clamp;
          } else {
            throw ConfigError("config key 'traj.pole_policy': '" + v +
                              "' is not one of halt, clamp");
          }
        },
        [](const RunConfig& rc) {
          return std::string(rc.traj.pole_policy == PolePolicy::Halt ? "halt" : "clamp");
        }};

    dbl("scales.rho_min", [](RunConfig& rc) -> double& { return rc.scales.rho_min; });
    dbl("scales.rho_max", [](RunConfig& rc) -> double& { return rc.scales.rho_max; });
    integer("scales.n", [](RunConfig& rc) -> int& { return rc.scales.n; });

    m["verify.suite"] = {
        [](Draft& d, const std::string& v) {
          const std::string s = lower(trim(v));
          if (s == "quick") {
            d.rc.verify.suite = Suite::Quick;
          } else if (s == "full") {
            d.rc.verify.suite = Suite::Full;
          } else {
            throw ConfigError("config key 'verify.suite': '" + v + "' is not one of quick, full");
          }
        },
        [](const RunConfig& rc) {
          return std::string(rc.verify.suite == Suite::Quick ? "quick" : "full");
        }};
    dbl("verify.tamper_prefactor", [](RunConfig& rc) -> double& {
      return rc.verify.tamper_prefactor;
    });
    return m;
  }();
  return s;
}

void apply(Draft& d, const std::string& key, const std::string& value) {
  const auto& s = schema();
  const auto it = s.find(key);
  if (it == s.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second.set(d, value);
}

void validate(const RunConfig& rc) {
  rc.quad.validate();
  const SliceParams& sl = rc.slice;
  if (sl.n1 < 2 || sl.n2 < 2) throw ConfigError("wigner-slice: grid sizes must be >= 2");
  if (!(sl.max1 > sl.min1) || !(sl.max2 > sl.min2)) {
    throw ConfigError("wigner-slice: each axis needs max > min");
  }
  if ((sl.plane == Plane::RhoPrho || sl.plane == Plane::RhoPphi) && !(sl.min1 >= kRhoMin)) {
    throw ConfigError("wigner-slice: rho axis must start at or above rho_min");
  }
  if (sl.plane == Plane::ZPz && !(sl.rho >= kRhoMin)) {
    throw ConfigError("wigner-slice: rho must be at or above rho_min");
  }
  TrajConfig tc;
  tc.dt = rc.traj.dt;
  tc.t_max = rc.traj.t_max;
  tc.sample_stride = rc.traj.sample_stride;
  tc.spec = rc.quad;
  tc.validate();
  if (!(rc.scales.rho_min >= kRhoMin) || !(rc.scales.rho_max > rc.scales.rho_min) ||
      rc.scales.n < 2) {
    throw ConfigError("scales: need rho_min >= rho_min bound, rho_max > rho_min and n >= 2");
  }
  if (!(rc.verify.tamper_prefactor > 0.0)) {
    throw ConfigError("verify.tamper_prefactor must be positive");
  }
}

// Plane-specific axis defaults, used unless the document sets them.
void plane_defaults(SliceParams& s) {
  switch (s.plane) {
    case Plane::ZPz:
      s.min1 = -3.0, s.max1 = 3.0, s.min2 = -3.0, s.max2 = 3.0;
      break;
    case Plane::RhoPrho:
      s.min1 = 0.25, s.max1 = 3.0, s.min2 = -6.0, s.max2 = 6.0;
      break;
    case Plane::RhoPphi:
      s.min1 = 0.25, s.max1 = 2.0, s.min2 = -6.0, s.max2 = 6.0;
      break;
  }
}

}  // namespace

Command command_from_string(const std::string& s) {
  if (s == "wigner-slice") return Command::WignerSlice;
  if (s == "verify") return Command::Verify;
  if (s == "traj") return Command::Traj;
  if (s == "scales") return Command::Scales;
  throw ConfigError("unknown command '" + s + "'");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::WignerSlice: return "wigner-slice";
    case Command::Verify: return "verify";
    case Command::Traj: return "traj";
    case Command::Scales: return "scales";
  }
  return "?";
}

std::string to_string(Plane p) {
  switch (p) {
    case Plane::ZPz: return "z-pz";
    case Plane::RhoPrho: return "rho-prho";
    case Plane::RhoPphi: return "rho-pphi";
  }
  return "?";
}

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : schema()) keys.push_back(k);
  return keys;
}

std::map<std::string, std::string> RunConfig::echo() const {
  std::map<std::string, std::string> out;
  for (const auto& [k, def] : schema()) out[k] = def.get(*this);
  out["command"] = to_string(command);
  out["format"] = format == Format::Csv ? "csv" : "json";
  out["out"] = this->out;
  return out;
}

RunConfig load_config(Command cmd, const std::string& config_path,
                      const std::vector<std::string>& overrides) {
  std::vector<std::pair<std::string, std::string>> entries;
  if (!config_path.empty()) {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(config_path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError("cannot read config '" + config_path + "': " + e.message() +
                        " (line " + std::to_string(e.line()) + ")");
    }
    for (const auto& [section, body] : tree) {
      if (body.empty()) {
        throw ConfigError("config key '" + section + "' must live inside a [section]");
      }
      for (const auto& [key, value] : body) {
        entries.emplace_back(section + "." + key, value.get_value<std::string>());
      }
    }
  }
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override '" + ov + "' must have the form section.key=value");
    }
    entries.emplace_back(trim(ov.substr(0, eq)), ov.substr(eq + 1));
  }

  Draft d;
  d.rc.command = cmd;
  // The plane decides the axis defaults, so it is applied first.
  for (const auto& [k, v] : entries) {
    if (k == "wigner-slice.plane") apply(d, k, v);
  }
  plane_defaults(d.rc.slice);
  for (const auto& [k, v] : entries) {
    if (k != "wigner-slice.plane") apply(d, k, v);
  }
  d.rc.phys = PhysConfig(d.hbar, d.mass, d.sigma_r);
  validate(d.rc);
  return d.rc;
}

}  // namespace funnel::cli
