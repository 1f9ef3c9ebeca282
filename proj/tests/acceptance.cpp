// Acceptance gate: one PASS/FAIL line per criterion, runtime budgets included.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "funnel_cli/commands.hpp"
#include "funnel_cli/config.hpp"

using namespace funnel::cli;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> checks;
  double budget_s;
};

const std::vector<Criterion> kCriteria = {
    {1, "Hamilton-Jacobi identity", {"hj_identity"}, 1.0},
    {2, "Elliptic equivalence", {"elliptic_equivalence"}, 10.0},
    {3, "Wigner realness and parity", {"wigner_realness_parity"}, 30.0},
    {4, "Marginal identity and normalisation", {"marginal_identity", "normalization"}, 120.0},
    {5, "Moment oracles", {"moment_oracles"}, 300.0},
    {6, "Quantum-pressure link", {"pressure_link"}, 1.0},
    {7, "Mean acceleration averaging", {"mean_acceleration"}, 600.0},
    {8, "Divergence consistency", {"divergence_consistency"}, 300.0},
    {9, "Wigner negativity", {"wigner_negativity"}, 120.0},
    {10, "Classical conservation", {"classical_conservation"}, 60.0},
    {11, "Micro/macro ordering", {"micro_macro_ordering"}, 1800.0},
    {12, "Scale monotonicity", {"scale_monotonicity"}, 1.0},
};

}  // namespace

int main() {
  RunConfig rc = load_config(Command::Verify, "", {"verify.suite=full"});
  const std::vector<CheckResult> results = run_checks(rc);
  std::map<std::string, const CheckResult*> by_name;
  for (const auto& r : results) by_name[r.name] = &r;

  int failed = 0;
  for (const Criterion& c : kCriteria) {
    bool ok = true;
    double seconds = 0.0;
    std::string detail;
    for (const std::string& n : c.checks) {
      const auto it = by_name.find(n);
      if (it == by_name.end()) {
        ok = false;
        detail += " [" + n + ": not run]";
        continue;
      }
      const CheckResult& r = *it->second;
      ok = ok && r.passed;
      seconds += r.seconds;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3g (tol %.3g)", r.measured, r.tolerance);
      detail += " [" + n + ": " + (r.passed ? "ok " : "failed ") + buf + "; " + r.detail + "]";
    }
    const bool in_budget = seconds < c.budget_s;
    ok = ok && in_budget;
    failed += ok ? 0 : 1;
    std::printf("%s %2d %s: %.2f s of %.0f s budget%s\n", ok ? "PASS" : "FAIL", c.id,
                c.title.c_str(), seconds, c.budget_s, detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(kCriteria.size()) - failed,
              kCriteria.size());
  return failed == 0 ? 0 : 1;
}
