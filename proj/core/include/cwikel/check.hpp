#pragma once

#include <cmath>
#include <string>
#include <utility>

namespace cwikel {

/// One asserted inequality lhs <= rhs * (1 + slack), tagged with the
/// statement it instantiates.
struct InequalityCheck {
  std::string anchor;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool verdict = true;

  static InequalityCheck at_most(std::string anchor, double lhs, double rhs, double slack = 0.0) {
    return {std::move(anchor), lhs, rhs, slack, lhs <= rhs * (1.0 + slack)};
  }
  /// Strict lhs < rhs.
  static InequalityCheck less_than(std::string anchor, double lhs, double rhs) {
    return {std::move(anchor), lhs, rhs, 0.0, lhs < rhs};
  }
  /// |lhs - rhs| <= slack (absolute).
  static InequalityCheck near(std::string anchor, double lhs, double rhs, double slack) {
    return {std::move(anchor), lhs, rhs, slack, std::abs(lhs - rhs) <= slack};
  }
};

}  // namespace cwikel
