#include "factorbreak/diagnostics.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "factorbreak/error.hpp"
#include "factorbreak/factors.hpp"

namespace factorbreak {

namespace {

std::string unit_name(const std::vector<std::string>& ids, Eigen::Index i) {
  if (static_cast<std::size_t>(i) < ids.size()) return "'" + ids[i] + "'";
  return "unit " + std::to_string(i + 1);
}

bool is_constant(const Eigen::VectorXd& centered, const Eigen::VectorXd& raw) {
  const double scale = std::max(1.0, raw.cwiseAbs().maxCoeff());
  return !(centered.norm() > 1e-12 * scale * std::sqrt(static_cast<double>(raw.size())));
}

}  // namespace

double pesaran_cd(const Eigen::MatrixXd& residuals, const std::vector<std::string>& ids) {
  const auto T = residuals.rows();
  const auto N = residuals.cols();
  if (N < 2) throw InputError("CD requires N >= 2");
  if (T < 2) throw InputError("CD requires T >= 2");

  // With unit-norm centered columns z_i, sum_{i<j} rho_ij = (|sum_i z_i|^2 - N) / 2.
  Eigen::VectorXd total = Eigen::VectorXd::Zero(T);
  for (Eigen::Index i = 0; i < N; ++i) {
    const Eigen::VectorXd raw = residuals.col(i);
    Eigen::VectorXd z = raw.array() - raw.mean();
    if (is_constant(z, raw)) throw InputError("CD: constant residual series for " + unit_name(ids, i));
    total += z / z.norm();
  }
  const double pair_sum = (total.squaredNorm() - static_cast<double>(N)) / 2.0;
  const double n = static_cast<double>(N);
  return std::sqrt(2.0 * static_cast<double>(T) / (n * (n - 1.0))) * pair_sum;
}

double chi_squared_sf(double x, double dof) {
  if (!(dof > 0.0)) throw ConfigError("chi-squared needs positive degrees of freedom");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

double ljung_box_q(const std::vector<double>& acf, long T) {
  double q = 0.0;
  for (std::size_t k = 1; k <= acf.size(); ++k) {
    q += acf[k - 1] * acf[k - 1] / static_cast<double>(T - static_cast<long>(k));
  }
  return static_cast<double>(T) * static_cast<double>(T + 2) * q;
}

std::vector<double> autocorrelations(const Eigen::VectorXd& series, int m) {
  const Eigen::VectorXd c = series.array() - series.mean();
  const double denom = c.squaredNorm();
  const auto T = c.size();
  std::vector<double> acf(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) acf[k - 1] = c.head(T - k).dot(c.tail(T - k)) / denom;
  return acf;
}

LjungBox ljung_box(const Eigen::VectorXd& series, int m) {
  const auto T = series.size();
  if (m < 1) throw ConfigError("Ljung-Box needs at least one lag");
  if (m >= T) {
    throw InputError("Ljung-Box lag m=" + std::to_string(m) + " must be below T=" +
                     std::to_string(T));
  }
  const Eigen::VectorXd c = series.array() - series.mean();
  if (is_constant(c, series)) throw InputError("Ljung-Box: constant series");
  LjungBox out;
  out.q = ljung_box_q(autocorrelations(series, m), T);
  out.p_value = chi_squared_sf(out.q, m);
  return out;
}

int default_lbq_lags(long T) {
  return static_cast<int>(std::max<long>(1, std::min<long>(10, T / 5)));
}

LbqSummary lbq_rejection_fraction(const Eigen::MatrixXd& residuals, int m, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  LbqSummary out;
  out.per_unit_q.assign(static_cast<std::size_t>(residuals.cols()),
                        std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index i = 0; i < residuals.cols(); ++i) {
    try {
      const LjungBox lb = ljung_box(residuals.col(i), m);
      out.per_unit_q[i] = lb.q;
      ++out.evaluated;
      if (lb.p_value < alpha) ++out.rejected;
    } catch (const InputError&) {
      ++out.skipped;
    }
  }
  if (out.evaluated == 0) throw InputError("Ljung-Box undefined for every column");
  out.fraction = static_cast<double>(out.rejected) / out.evaluated;
  return out;
}

DiagnosticsReport diagnose(const PanelData& panel, int r_tilde, int lbq_lags, double alpha) {
  if (panel.N() < 2) throw InputError("CD requires N >= 2");
  const FactorEstimate est = estimate_factors(panel, r_tilde);
  DiagnosticsReport rep;
  rep.r_tilde = r_tilde;
  rep.alpha = alpha;
  rep.lbq_lags = lbq_lags > 0 ? lbq_lags : default_lbq_lags(panel.T());
  rep.cd_stat = pesaran_cd(est.residuals, panel.series_ids());
  const LbqSummary lbq = lbq_rejection_fraction(est.residuals, rep.lbq_lags, alpha);
  rep.lbq_reject_fraction = lbq.fraction;
  rep.lbq_skipped = lbq.skipped;
  rep.per_unit_q = lbq.per_unit_q;
  return rep;
}

}  // namespace factorbreak
