#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "factorbreak/factors.hpp"
#include "factorbreak/kernels.hpp"
#include "factorbreak/panel.hpp"

namespace factorbreak {

/// How the reference panels for the critical value are drawn.
enum class NullSimulation {
  kFactorModel,  // x*_it = lambda*_i' f*_t + e*_it, all iid N(0, 1)
  kPureNoise,    // x*_it iid N(0, 1)
};

enum class CriticalValueRule {
  kSimulated,   // empirical 1 - alpha quantile of B simulated statistics
  kAsymptotic,  // standard normal 1 - alpha quantile
};

const char* to_string(NullSimulation v) noexcept;
const char* to_string(CriticalValueRule v) noexcept;

struct TestConfig {
  int r_tilde = 2;
  int B = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 42;
  bool standardize_input = false;

  // Bandwidths default to h = (TN)^(-1/5) and l = ceil(0.75 T^(1/3)).
  std::optional<double> h_override;
  std::optional<int> lag_override;
  double h_scale = 1.0;  // applied to the rule-of-thumb h only
  KernelKind kernel = KernelKind::kBartlett;
  KernelKind hac_kernel = KernelKind::kBartlett;

  NullSimulation null_sim = NullSimulation::kFactorModel;
  CriticalValueRule crit = CriticalValueRule::kSimulated;
  GramPath gram_path = GramPath::kAuto;

  /// Worker cap for the null simulation. Results do not depend on it.
  int threads = 1;

  /// Throws ConfigError unless B >= 19, 0 < alpha < 1, r_tilde >= 1,
  /// h_scale > 0, threads >= 1 and any overrides are in range.
  void validate() const;
};

/// The kernel the test uses on a T x N panel under `cfg`.
KernelSpec resolve_kernel(const TestConfig& cfg, long T, long N);

struct TestResult {
  int T = 0;
  int N = 0;
  int r_tilde = 0;

  double l_nt = 0.0;
  double sigma2_hat = 0.0;
  double l_hat = 0.0;
  double crit_value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  std::vector<double> sim_stats;  // empty for the asymptotic rule

  double h_used = 0.0;
  int l_used = 0;
  double nu0 = 0.0;
  Eigen::VectorXd aggregated_residuals;  // s_t / sqrt(N)

  // Effective configuration, recorded for reproducibility.
  int B = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  CriticalValueRule crit_rule = CriticalValueRule::kSimulated;
  NullSimulation null_sim = NullSimulation::kFactorModel;
  bool standardized = false;

  std::vector<std::string> warnings;
};

/// L_NT = (1 / (T^2 N^2 h)) sum_{t,u} K((t - u) / (T h)) s_t s_u.
///
/// `s` holds the residual column sums s_t = sum_i e_it, which collapses the
/// double sum over series pairs. Only the band |t - u| <= floor(T h) is
/// visited since K vanishes outside it.
double statistic_lnt(const Eigen::VectorXd& s, long N, const KernelSpec& kernel);

/// Kernel-weighted autocovariance sum of the aggregated residuals
/// e_t = s_t / sqrt(N):
///
///   sigma2 = sum_{k=-l}^{l} a(k / l) (1/T) sum_{t=1}^{T-|k|} e_t e_{t+|k|}.
///
/// The series is not demeaned. Throws ConfigError when l >= T.
double hac_sigma2(const Eigen::VectorXd& s, long N, const KernelSpec& kernel);

/// T N sqrt(h) [L_NT - sigma2 / (T N h)] / (sqrt(2 nu0) sigma2).
/// Throws DegenerateVarianceError when sigma2 <= 1e-12.
double standardized_stat(double l_nt, double sigma2, long T, long N,
                         const KernelSpec& kernel);

inline constexpr double kDegenerateVarianceTol = 1e-12;

/// All three quantities of the statistic for a single panel.
struct StatisticParts {
  double l_nt = 0.0;
  double sigma2 = 0.0;
  double l_hat = 0.0;
  Eigen::VectorXd aggregated;  // s_t / sqrt(N)
};

/// Factor fit, residual sums, L_NT, HAC variance and standardization.
StatisticParts compute_statistic(const Eigen::MatrixXd& x, int r_tilde,
                                 const KernelSpec& kernel,
                                 GramPath path = GramPath::kAuto);

/// B statistics on synthetic null panels of the same shape. Replication b
/// draws from Rng(derive_seed(cfg.seed, b)), so the output is independent of
/// cfg.threads.
std::vector<double> simulate_null_statistics(long T, long N, const TestConfig& cfg);

/// Type-1 quantile: the ceil(p B)-th order statistic (1-based).
double empirical_quantile(std::vector<double> xs, double p);

/// (1 + #{b : sim[b] >= stat}) / (B + 1).
double simulated_p_value(const std::vector<double>& sim, double stat);

/// Full procedure on an observed panel.
TestResult run_test(const PanelData& panel, const TestConfig& cfg);

}  // namespace factorbreak
