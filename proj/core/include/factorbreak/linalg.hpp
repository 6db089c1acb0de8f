#pragma once

#include <Eigen/Dense>

namespace factorbreak {

struct EigenPairs {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns match `values`
};

/// The k largest eigenpairs of a symmetric matrix, from a dense direct solver
/// (LAPACK dsyevr restricted to the top index range). Only the lower triangle
/// of `sym` is read. Throws NumericError on solver failure.
EigenPairs top_eigenpairs(const Eigen::MatrixXd& sym, int k);

/// Lower triangle of A^T A.
Eigen::MatrixXd gram_lower(const Eigen::MatrixXd& a);

}  // namespace factorbreak
