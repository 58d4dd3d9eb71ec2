#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "strive/advantage.hpp"

namespace strive {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst error or deviation observed
  double tolerance = 0.0;
  std::string detail;
};

// The joint-advantage implementation under test. Swappable so the suite can
// be pointed at a deliberately broken variant.
using JointAdvantageFn = std::function<AdvantageMatrix(const RewardMatrix&, double guard)>;

struct CheckOptions {
  std::uint64_t seed = 2024;
  JointAdvantageFn joint_advantage;  // empty: joint_dual_group_advantage
};

// Known faulty implementations for mutation testing. "column_normalized"
// normalizes each variant column separately instead of the whole pool;
// "sample_std" divides by N-1.
JointAdvantageFn faulty_joint_advantage(const std::string& name);
std::vector<std::string> faulty_joint_advantage_names();

std::vector<CheckResult> run_self_checks(const CheckOptions& options = {});

// One line per check; returns true iff every check passed.
bool print_check_report(const std::vector<CheckResult>& results, std::ostream& out);

// Central-difference helpers shared with the tests.
double relative_error(double analytic, double numeric, double floor = 1e-8);

}  // namespace strive
