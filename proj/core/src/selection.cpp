#include "factorbreak/selection.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "factorbreak/error.hpp"
#include "factorbreak/rng.hpp"

namespace factorbreak {

SelectionResult sequential_factor_number(const PanelData& panel, int r_max,
                                         const TestConfig& cfg) {
  cfg.validate();
  if (r_max < 1 || r_max > std::min(panel.T(), panel.N())) {
    throw ConfigError("r_max=" + std::to_string(r_max) + " outside [1, min(T, N)]");
  }
  const PanelData data = cfg.standardize_input ? standardize(panel) : panel;

  SelectionResult out;
  out.r_max = r_max;
  out.alpha = cfg.alpha;
  for (int j = 1; j <= r_max; ++j) {
    TestConfig step_cfg = cfg;
    step_cfg.r_tilde = j;
    step_cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(j));
    step_cfg.standardize_input = false;

    SelectionStep step;
    step.j = j;
    try {
      step.result = run_test(data, step_cfg);
    } catch (const DegenerateVarianceError&) {
      // j factors reproduce the panel exactly: nothing is left to test.
      const double nan = std::numeric_limits<double>::quiet_NaN();
      step.exact_fit = true;
      step.result.T = data.T();
      step.result.N = data.N();
      step.result.r_tilde = j;
      step.result.l_hat = nan;
      step.result.crit_value = nan;
      step.result.p_value = 1.0;
      step.result.reject = false;
      step.result.alpha = cfg.alpha;
      step.result.B = cfg.B;
      step.result.seed = step_cfg.seed;
      step.result.warnings.push_back("residuals vanish at this factor number");
    } catch (...) {
      rethrow_with_context("sequential selection, j=" + std::to_string(j));
    }
    const bool reject = step.result.reject;
    out.per_j.push_back(std::move(step));
    if (!reject) {
      out.r_hat = j;
      break;
    }
  }
  return out;
}

}  // namespace factorbreak
