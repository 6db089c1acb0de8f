#include "factorbreak/linalg.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <string>
#include <vector>

#include "factorbreak/error.hpp"

namespace factorbreak {

EigenPairs top_eigenpairs(const Eigen::MatrixXd& sym, int k) {
  const auto n = static_cast<lapack_int>(sym.rows());
  if (sym.cols() != sym.rows()) throw NumericError("top_eigenpairs: matrix is not square");
  if (k < 1 || k > n) {
    throw NumericError("top_eigenpairs: k=" + std::to_string(k) + " outside [1, " +
                       std::to_string(n) + "]");
  }

  Eigen::MatrixXd a = sym;  // dsyevr destroys its input
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, k);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  const lapack_int il = n - k + 1;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, il, n,
                     0.0, &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || found != k) {
    throw NumericError("symmetric eigensolver failed (dsyevr info=" + std::to_string(info) +
                       ", found " + std::to_string(found) + " of " + std::to_string(k) + ")");
  }

  // dsyevr returns ascending order.
  EigenPairs out;
  out.values = w.head(k).reverse();
  out.vectors = z.rowwise().reverse();
  return out;
}

Eigen::MatrixXd gram_lower(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(a.cols(), a.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  return g;
}

}  // namespace factorbreak
