#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace superint {

/// Least-squares failure (including rank deficiency and residuals above
/// tolerance); carries the achieved residual when known.
struct FitError : std::runtime_error {
  double residual;
  explicit FitError(const std::string& msg, double res = 0.0)
      : std::runtime_error(msg), residual(res) {}
};

namespace lsq {

/// min ||A z - b||_2 with column equilibration and one round of iterative
/// refinement; throws FitError when A is rank-deficient (relative pivot
/// threshold 1e-10).
inline Eigen::VectorXd solve(const Eigen::MatrixXd& A,
                             const Eigen::VectorXd& b) {
  Eigen::VectorXd scale(A.cols());
  Eigen::MatrixXd As = A;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    const double n = A.col(j).norm();
    scale[j] = n > 0.0 ? n : 1.0;
    As.col(j) /= scale[j];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(As);
  qr.setThreshold(1e-10);
  if (qr.rank() < A.cols())
    throw FitError("least squares: rank-deficient system (rank " +
                   std::to_string(qr.rank()) + " of " +
                   std::to_string(A.cols()) + ")");
  Eigen::VectorXd z = qr.solve(b);
  z += qr.solve(b - As * z);
  return z.cwiseQuotient(scale);
}

/// Complex right-hand side over a real design matrix: real and imaginary
/// parts are independent least-squares problems.
inline Eigen::VectorXcd solve(const Eigen::MatrixXd& A,
                              const Eigen::VectorXcd& b) {
  const Eigen::VectorXd re = solve(A, Eigen::VectorXd(b.real()));
  const Eigen::VectorXd im = solve(A, Eigen::VectorXd(b.imag()));
  return re + std::complex<double>(0, 1) * im;
}

/// Numerical rank of a row-normalized Jacobian: singular values are counted
/// against rel_threshold * sigma_max. Rows with zero norm are dropped.
inline int jacobian_rank(Eigen::MatrixXd J, double rel_threshold) {
  for (Eigen::Index i = 0; i < J.rows(); ++i) {
    const double n = J.row(i).norm();
    if (n > 0.0) J.row(i) /= n;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cut = rel_threshold * sv[0];
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) ++rank;
  return rank;
}

}  // namespace lsq
}  // namespace superint
