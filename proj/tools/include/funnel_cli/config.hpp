#pragma once

#include <map>
#include <string>
#include <vector>

#include "funnel/errors.hpp"
#include "funnel/moyal_accel.hpp"
#include "funnel/phys_config.hpp"
#include "funnel/quadrature.hpp"
#include "funnel/trajectory.hpp"
#include "funnel/wigner.hpp"

namespace funnel::cli {

enum class Command { WignerSlice, Verify, Traj, Scales };
enum class Format { Csv, Json };
enum class Plane { ZPz, RhoPrho, RhoPphi };

Command command_from_string(const std::string& s);
std::string to_string(Command c);
std::string to_string(Plane p);

struct SliceParams {
  Plane plane = Plane::RhoPphi;
  int n1 = 41;
  int n2 = 41;
  double min1 = 0.25;
  double max1 = 2.0;
  double min2 = -6.0;
  double max2 = 6.0;
  double rho = 0.5;  // fixed radius of the z-pz plane
  double phi = 0.0;
  PhaseBranch branch = PhaseBranch::Exact;
};

struct TrajParams {
  std::vector<std::string> scenarios{"fig3"};
  std::vector<VariantId> variants{VariantId::Classical, VariantId::V1, VariantId::V2,
                                  VariantId::V3};
  double dt = 1e-3;
  double t_max = 20.0;
  PolePolicy pole_policy = PolePolicy::Halt;
  int sample_stride = 1;
};

struct ScalesParams {
  double rho_min = 0.3;
  double rho_max = 5.0;
  int n = 48;
};

enum class Suite { Quick, Full };

struct VerifyParams {
  Suite suite = Suite::Quick;
  double tamper_prefactor = 1.0;  // debug: multiplies the double-integral W in the elliptic check
};

struct RunConfig {
  Command command = Command::Verify;
  PhysConfig phys = reduced_defaults();
  QuadSpec quad;
  SliceParams slice;
  TrajParams traj;
  ScalesParams scales;
  VerifyParams verify;
  std::string out;  // empty: standard output (directory for traj)
  Format format = Format::Csv;

  // Fully resolved "section.key" -> value, for the metadata echo.
  std::map<std::string, std::string> echo() const;
};

// Key-value document: INI sections phys, quad, wigner-slice, traj, scales, verify.
// Overrides take the form section.key=value and are applied after the file.
// Throws ConfigError for unknown sections or keys, malformed values or violated invariants.
RunConfig load_config(Command cmd, const std::string& config_path,
                      const std::vector<std::string>& overrides);

// All accepted "section.key" names.
std::vector<std::string> known_keys();

}  // namespace funnel::cli
