#include "factorbreak/factors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "factorbreak/error.hpp"
#include "factorbreak/linalg.hpp"

namespace factorbreak {

namespace {

// Largest |entry| made positive; the first index wins ties.
void normalize_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index t = 0; t < vectors.rows(); ++t) {
      const double a = std::abs(vectors(t, k));
      if (a > best) {
        best = a;
        arg = t;
      }
    }
    if (vectors(arg, k) < 0.0) vectors.col(k) *= -1.0;
  }
}

// Orthonormal time-domain eigenvectors U (T x r) of X X^T, with eigenvalues.
EigenPairs time_eigenvectors(const Eigen::MatrixXd& x, int r, GramPath path) {
  const auto T = x.rows();
  const auto N = x.cols();
  if (path == GramPath::kAuto) path = N < T ? GramPath::kCross : GramPath::kTime;

  if (path == GramPath::kCross) {
    EigenPairs cross = top_eigenpairs(gram_lower(x), r);
    // u_k = X v_k / sqrt(mu_k) needs mu_k well away from zero.
    const double floor = 1e-10 * std::max(cross.values(0), 0.0);
    if (cross.values(r - 1) > floor && cross.values(r - 1) > 0.0) {
      EigenPairs out;
      out.vectors = x * cross.vectors;
      out.vectors.array().rowwise() /= cross.values.transpose().array().sqrt();
      out.values = std::move(cross.values);
      return out;
    }
  }
  return top_eigenpairs(gram_lower(x.transpose()), r);
}

}  // namespace

Eigen::VectorXd residual_column_sums(const Eigen::MatrixXd& residuals) {
  // Column by column so each s_t is summed left to right over i.
  Eigen::VectorXd s = Eigen::VectorXd::Zero(residuals.rows());
  for (Eigen::Index i = 0; i < residuals.cols(); ++i) s += residuals.col(i);
  return s;
}

FactorEstimate estimate_factors(const Eigen::MatrixXd& x, int r_tilde, GramPath path) {
  const auto T = x.rows();
  const auto N = x.cols();
  if (r_tilde < 1 || r_tilde > std::min(T, N)) {
    throw ConfigError("number of factors " + std::to_string(r_tilde) + " outside [1, min(T, N) = " +
                      std::to_string(std::min(T, N)) + "]");
  }

  EigenPairs eig = time_eigenvectors(x, r_tilde, path);
  normalize_signs(eig.vectors);

  FactorEstimate est;
  est.r_tilde = r_tilde;
  const double sqrt_t = std::sqrt(static_cast<double>(T));
  est.f_hat = sqrt_t * eig.vectors;
  est.lambda_hat = x.transpose() * est.f_hat / static_cast<double>(T);
  est.eigvals = std::move(eig.values);
  est.residuals = x;
  est.residuals.noalias() -= est.f_hat * est.lambda_hat.transpose();
  est.residual_colsum = residual_column_sums(est.residuals);
  return est;
}

FactorEstimate estimate_factors(const PanelData& panel, int r_tilde, GramPath path) {
  return estimate_factors(panel.values(), r_tilde, path);
}

}  // namespace factorbreak
