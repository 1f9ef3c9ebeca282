#pragma once

#include <string>
#include <vector>

#include "funnel_cli/config.hpp"

namespace funnel::cli {

// Exit codes of the tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAccuracy = 3;

struct SliceTable {
  std::string axis1_name;
  std::string axis2_name;
  std::vector<double> axis1;  // row-major: axis1 outer, axis2 inner
  std::vector<double> axis2;
  std::vector<double> w;
  std::vector<double> est_error;
};

// W over the configured plane. Propagates AccuracyError and NonFiniteError.
SliceTable wigner_slice(const RunConfig& rc);

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

// The verification suite. Quick runs a reduced trajectory set; Full adds the
// micro/macro ordering runs at t_max = 20.
std::vector<CheckResult> run_checks(const RunConfig& rc);

struct TrajRun {
  std::string scenario;
  VariantId variant = VariantId::Classical;
  Trajectory trajectory;
};

std::vector<TrajRun> run_trajectories(const RunConfig& rc);

// Renderers return the full file body.
std::string render_slice(const SliceTable& t, const RunConfig& rc, Format f, double wall_s);
std::string render_checks(const std::vector<CheckResult>& c, const RunConfig& rc, Format f,
                          double wall_s);
std::string render_trajectory(const TrajRun& r, Format f, const RunConfig& rc);
// Carries no wall time, so reruns are byte-identical.
std::string render_traj_summary(const std::vector<TrajRun>& runs, const RunConfig& rc);
std::string render_scales(const std::vector<ScaleRow>& rows, const RunConfig& rc, Format f,
                          double wall_s);

// Entry point: parses argv, runs the command, maps errors to exit codes.
int run_cli(int argc, char** argv);

}  // namespace funnel::cli
