#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace forgetting {

class TaskCollection;

/// Outcome of one bound verification.
struct CheckResult {
  int id = 0;
  std::string title;
  bool passed = false;
  /// Worst measured quantity and the threshold it was held to.
  double measured = 0.0;
  double limit = 0.0;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;
};

struct Check {
  int id;
  std::string title;
  double time_limit;
  std::function<CheckResult()> run;
};

enum class CheckSuite { quick, all };

/// The registered verifications; quick holds the no-forgetting, two-task
/// forgetting and distance checks.
std::vector<Check> checks(CheckSuite suite);

/// Runs each check, timing it; a check fails when it exceeds its time limit.
std::vector<CheckResult> run_checks(const std::vector<Check>& selected);

/// One line per check; returns true when all passed.
bool print_report(std::ostream& out, const std::vector<CheckResult>& results);

/// Exact expected forgetting under the uniform i.i.d. ordering, by
/// enumerating all T^k sequences. Only feasible for tiny T and k.
double enumerate_expected_forgetting(const TaskCollection& s, std::size_t k);

}  // namespace forgetting
