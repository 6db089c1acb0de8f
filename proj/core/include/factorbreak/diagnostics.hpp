#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "factorbreak/panel.hpp"

namespace factorbreak {

/// Pesaran CD: sqrt(2T / (N(N-1))) sum_{i<j} rho_ij over pairwise sample
/// correlations of the columns. Requires N >= 2 and non-constant columns.
double pesaran_cd(const Eigen::MatrixXd& residuals,
                  const std::vector<std::string>& ids = {});

struct LjungBox {
  double q = 0.0;
  double p_value = 1.0;
};

/// Upper tail of chi-squared with `dof` degrees of freedom (regularized upper
/// incomplete gamma Q(dof/2, x/2)).
double chi_squared_sf(double x, double dof);

/// Q = T (T + 2) sum_{k=1}^{m} acf_k^2 / (T - k) for acf[0..m-1] = rho_1..rho_m.
double ljung_box_q(const std::vector<double>& acf, long T);

/// Demeaned autocorrelations rho_1..rho_m with denominator sum (x - mean)^2.
std::vector<double> autocorrelations(const Eigen::VectorXd& series, int m);

/// Q over m lags and its chi^2_m p-value. Requires m < T and a non-constant
/// series.
LjungBox ljung_box(const Eigen::VectorXd& series, int m);

/// min(10, floor(T / 5)), at least 1.
int default_lbq_lags(long T);

struct LbqSummary {
  double fraction = 0.0;  // rejected / evaluated
  int rejected = 0;
  int evaluated = 0;
  int skipped = 0;        // columns where the Q-test was undefined
  std::vector<double> per_unit_q;  // NaN for skipped columns
};

/// Share of columns whose Ljung-Box p-value is below alpha.
LbqSummary lbq_rejection_fraction(const Eigen::MatrixXd& residuals, int m, double alpha);

struct DiagnosticsReport {
  int r_tilde = 0;
  double cd_stat = 0.0;
  double lbq_reject_fraction = 0.0;
  int lbq_lags = 0;
  double alpha = 0.05;
  int lbq_skipped = 0;
  std::vector<double> per_unit_q;
};

/// Residual diagnostics after extracting r_tilde principal-component factors.
/// lbq_lags <= 0 selects default_lbq_lags(T).
DiagnosticsReport diagnose(const PanelData& panel, int r_tilde, int lbq_lags = 0,
                           double alpha = 0.05);

}  // namespace factorbreak
