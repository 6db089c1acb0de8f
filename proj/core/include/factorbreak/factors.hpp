#pragma once

#include <Eigen/Dense>

#include "factorbreak/panel.hpp"

namespace factorbreak {

/// Which Gram matrix is eigendecomposed.
enum class GramPath {
  kAuto,   // the smaller of T x T and N x N
  kTime,   // X X^T (T x T)
  kCross,  // X^T X (N x N), converted to time-domain factors
};

/// Principal-component fit of a constant-loading factor model.
///
/// f_hat holds sqrt(T) times the leading orthonormal eigenvectors of X X^T,
/// so f_hat^T f_hat / T = I. lambda_hat = X^T f_hat / T and
/// residuals = X - f_hat lambda_hat^T. Each factor column is sign-normalized
/// so that its entry of largest magnitude is positive (lowest index on ties).
struct FactorEstimate {
  int r_tilde = 0;
  Eigen::MatrixXd f_hat;          // T x r
  Eigen::MatrixXd lambda_hat;     // N x r
  Eigen::VectorXd eigvals;        // r, descending
  Eigen::MatrixXd residuals;      // T x N
  Eigen::VectorXd residual_colsum;  // T, row sums of residuals
};

FactorEstimate estimate_factors(const Eigen::MatrixXd& x, int r_tilde,
                                GramPath path = GramPath::kAuto);
FactorEstimate estimate_factors(const PanelData& panel, int r_tilde,
                                GramPath path = GramPath::kAuto);

/// s_t = sum_i residuals(t, i).
Eigen::VectorXd residual_column_sums(const Eigen::MatrixXd& residuals);
inline const Eigen::VectorXd& residual_column_sums(const FactorEstimate& est) {
  return est.residual_colsum;
}

}  // namespace factorbreak
