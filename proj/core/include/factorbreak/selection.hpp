#pragma once

#include <optional>
#include <vector>

#include "factorbreak/panel.hpp"
#include "factorbreak/psytest.hpp"

namespace factorbreak {

struct SelectionStep {
  int j = 0;
  TestResult result;
  /// The j-factor fit leaves numerically zero residuals (degenerate long-run
  /// variance). Counted as a failure to reject; l_hat and crit_value are NaN.
  bool exact_fit = false;
};

struct SelectionResult {
  /// First j at which the test fails to reject; empty if every j <= r_max
  /// rejects.
  std::optional<int> r_hat;
  int r_max = 0;
  double alpha = 0.0;
  std::vector<SelectionStep> per_j;
};

inline constexpr int kDefaultRMax = 8;

/// Tests r = 1, 2, ... in turn and stops at the first non-rejection. Step j
/// uses seed derive_seed(cfg.seed, j).
SelectionResult sequential_factor_number(const PanelData& panel, int r_max,
                                         const TestConfig& cfg);

}  // namespace factorbreak
