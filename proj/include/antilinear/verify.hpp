#pragma once

#include <string>
#include <string_view>
#include <vector>

// Built-in invariant suites behind `antilinear verify`.
namespace antilinear::verify {

struct CheckResult {
  std::string suite;
  std::string name;
  double value;      // measured residual / error
  double tolerance;  // pass iff value <= tolerance
  bool passed;
};

/// "antilinear", "picard", "antidiagonal", "reductions".
std::vector<std::string_view> suite_names();

/// Runs one suite, or every suite for "all". Throws InputError for an unknown name.
std::vector<CheckResult> run_suite(std::string_view suite);

/// Fixed-width pass/fail table, one row per check.
std::string format_table(const std::vector<CheckResult>& results);

}  // namespace antilinear::verify
