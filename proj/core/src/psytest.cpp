#include "factorbreak/psytest.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "factorbreak/error.hpp"
#include "factorbreak/parallel.hpp"
#include "factorbreak/rng.hpp"

namespace factorbreak {

const char* to_string(NullSimulation v) noexcept {
  switch (v) {
    case NullSimulation::kFactorModel: return "factor_model";
    case NullSimulation::kPureNoise: return "pure_noise";
  }
  return "unknown";
}

const char* to_string(CriticalValueRule v) noexcept {
  switch (v) {
    case CriticalValueRule::kSimulated: return "simulated";
    case CriticalValueRule::kAsymptotic: return "asymptotic";
  }
  return "unknown";
}

void TestConfig::validate() const {
  if (r_tilde < 1) throw ConfigError("r_tilde must be at least 1");
  if (B < 19) throw ConfigError("B=" + std::to_string(B) + " is below the minimum of 19");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!(h_scale > 0.0) || !std::isfinite(h_scale)) throw ConfigError("h_scale must be positive");
  if (h_override && !(*h_override > 0.0 && *h_override < 1.0)) {
    throw ConfigError("bandwidth override must lie in (0, 1)");
  }
  if (lag_override && *lag_override < 1) throw ConfigError("HAC lag override must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

KernelSpec resolve_kernel(const TestConfig& cfg, long T, long N) {
  const double h = cfg.h_override.value_or(rule_of_thumb_h(T, N) * cfg.h_scale);
  const int l = cfg.lag_override.value_or(hac_lag(T));
  return KernelSpec::make(h, l, cfg.kernel, cfg.hac_kernel);
}

double statistic_lnt(const Eigen::VectorXd& s, long N, const KernelSpec& kernel) {
  const Eigen::Index T = s.size();
  const double th = static_cast<double>(T) * kernel.h();
  const auto band = std::min<Eigen::Index>(T - 1, static_cast<Eigen::Index>(std::floor(th)));

  double total = kernel_value(kernel.kind(), 0.0) * s.squaredNorm();
  for (Eigen::Index d = 1; d <= band; ++d) {
    const double w = kernel_value(kernel.kind(), static_cast<double>(d) / th);
    if (w == 0.0) continue;
    total += 2.0 * w * s.head(T - d).dot(s.tail(T - d));
  }
  const double tn = static_cast<double>(T) * static_cast<double>(N);
  return total / (tn * tn * kernel.h());
}

double hac_sigma2(const Eigen::VectorXd& s, long N, const KernelSpec& kernel) {
  const Eigen::Index T = s.size();
  const int l = kernel.hac_lag();
  if (l >= T) {
    throw ConfigError("HAC lag exceeds sample (l=" + std::to_string(l) +
                      ", T=" + std::to_string(T) + ")");
  }
  const Eigen::VectorXd e = s / std::sqrt(static_cast<double>(N));
  double total = e.squaredNorm();  // a(0) = 1
  for (int k = 1; k <= l; ++k) {
    const double w = kernel_value(kernel.hac_kind(), static_cast<double>(k) / l);
    if (w == 0.0) continue;
    total += 2.0 * w * e.head(T - k).dot(e.tail(T - k));
  }
  return total / static_cast<double>(T);
}

double standardized_stat(double l_nt, double sigma2, long T, long N, const KernelSpec& kernel) {
  if (!(sigma2 > kDegenerateVarianceTol)) {
    throw DegenerateVarianceError("degenerate long-run variance (sigma2=" +
                                  std::to_string(sigma2) + ")");
  }
  const double tn = static_cast<double>(T) * static_cast<double>(N);
  const double h = kernel.h();
  const double centered = l_nt - sigma2 / (tn * h);
  return tn * std::sqrt(h) * centered / (std::sqrt(2.0 * kernel.nu0()) * sigma2);
}

StatisticParts compute_statistic(const Eigen::MatrixXd& x, int r_tilde,
                                 const KernelSpec& kernel, GramPath path) {
  const FactorEstimate est = estimate_factors(x, r_tilde, path);
  const auto T = x.rows();
  const auto N = x.cols();
  StatisticParts parts;
  parts.l_nt = statistic_lnt(est.residual_colsum, N, kernel);
  parts.sigma2 = hac_sigma2(est.residual_colsum, N, kernel);
  parts.aggregated = est.residual_colsum / std::sqrt(static_cast<double>(N));
  parts.l_hat = standardized_stat(parts.l_nt, parts.sigma2, T, N, kernel);
  return parts;
}

std::vector<double> simulate_null_statistics(long T, long N, const TestConfig& cfg) {
  cfg.validate();
  if (cfg.r_tilde > std::min(T, N)) {
    throw ConfigError("r_tilde exceeds min(T, N) for the null simulation");
  }
  const KernelSpec kernel = resolve_kernel(cfg, T, N);
  const int r = cfg.r_tilde;

  std::vector<double> stats(static_cast<std::size_t>(cfg.B));
  parallel_for(stats.size(), cfg.threads, [&](std::size_t b) {
    Rng rng(derive_seed(cfg.seed, b));
    Eigen::MatrixXd x(T, N);
    if (cfg.null_sim == NullSimulation::kFactorModel) {
      Eigen::MatrixXd f(T, r);
      Eigen::MatrixXd lambda(N, r);
      for (Eigen::Index t = 0; t < T; ++t)
        for (int k = 0; k < r; ++k) f(t, k) = rng.normal();
      for (Eigen::Index i = 0; i < N; ++i)
        for (int k = 0; k < r; ++k) lambda(i, k) = rng.normal();
      for (Eigen::Index t = 0; t < T; ++t)
        for (Eigen::Index i = 0; i < N; ++i) x(t, i) = rng.normal();
      x.noalias() += f * lambda.transpose();
    } else {
      for (Eigen::Index t = 0; t < T; ++t)
        for (Eigen::Index i = 0; i < N; ++i) x(t, i) = rng.normal();
    }
    try {
      stats[b] = compute_statistic(x, r, kernel, cfg.gram_path).l_hat;
    } catch (...) {
      rethrow_with_context("null simulation replication " + std::to_string(b));
    }
  });
  return stats;
}

double empirical_quantile(std::vector<double> xs, double p) {
  if (xs.empty()) throw ConfigError("empirical quantile of an empty sample");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("quantile level must lie in (0, 1)");
  const auto n = static_cast<double>(xs.size());
  // The 1e-9 guards against p * n landing a rounding error above an integer.
  auto k = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
  k = std::clamp<std::size_t>(k, 1, xs.size());
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k - 1), xs.end());
  return xs[k - 1];
}

double simulated_p_value(const std::vector<double>& sim, double stat) {
  const auto exceed = std::count_if(sim.begin(), sim.end(), [&](double v) { return v >= stat; });
  return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(sim.size()) + 1.0);
}

TestResult run_test(const PanelData& panel, const TestConfig& cfg) {
  cfg.validate();
  const PanelData data = cfg.standardize_input ? standardize(panel) : panel;
  const long T = data.T();
  const long N = data.N();
  if (cfg.r_tilde > std::min(T, N)) {
    throw ConfigError("r_tilde=" + std::to_string(cfg.r_tilde) + " exceeds min(T, N)=" +
                      std::to_string(std::min(T, N)));
  }

  TestResult res;
  res.T = static_cast<int>(T);
  res.N = static_cast<int>(N);
  res.r_tilde = cfg.r_tilde;
  res.B = cfg.B;
  res.alpha = cfg.alpha;
  res.seed = cfg.seed;
  res.crit_rule = cfg.crit;
  res.null_sim = cfg.null_sim;
  res.standardized = cfg.standardize_input;

  std::optional<KernelSpec> kernel;
  try {
    kernel = resolve_kernel(cfg, T, N);
  } catch (...) {
    rethrow_with_context("kernel");
  }
  res.h_used = kernel->h();
  res.l_used = kernel->hac_lag();
  res.nu0 = kernel->nu0();

  try {
    const StatisticParts parts = compute_statistic(data.values(), cfg.r_tilde, *kernel, cfg.gram_path);
    res.l_nt = parts.l_nt;
    res.sigma2_hat = parts.sigma2;
    res.l_hat = parts.l_hat;
    res.aggregated_residuals = parts.aggregated;
  } catch (...) {
    rethrow_with_context("statistic");
  }

  const Eigen::VectorXd& e = res.aggregated_residuals;
  const double var_e = (e.array() - e.mean()).square().sum() / static_cast<double>(T - 1);
  if (res.sigma2_hat < 1e-6 * var_e) {
    res.warnings.push_back("long-run variance is tiny relative to the variance of the "
                           "aggregated residuals; the panel may share a common trend");
  }

  if (cfg.crit == CriticalValueRule::kSimulated) {
    try {
      res.sim_stats = simulate_null_statistics(T, N, cfg);
    } catch (...) {
      rethrow_with_context("null simulation");
    }
    res.crit_value = empirical_quantile(res.sim_stats, 1.0 - cfg.alpha);
    res.p_value = simulated_p_value(res.sim_stats, res.l_hat);
  } else {
    const boost::math::normal_distribution<double> z;
    res.crit_value = boost::math::quantile(z, 1.0 - cfg.alpha);
    res.p_value = boost::math::cdf(boost::math::complement(z, res.l_hat));
  }
  res.reject = res.l_hat > res.crit_value;
  return res;
}

}  // namespace factorbreak
