#ifndef SLE_SYM_EIGEN_HPP
#define SLE_SYM_EIGEN_HPP

#include <type_traits>

#include <Eigen/Dense>

#include "sle/error.hpp"

namespace sle {

template <typename Scalar>
struct EigenPairs {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;                // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // one per column
};

namespace detail {
/// LAPACK dsyevr over the index range [0, count) when built with LAPACKE,
/// Eigen's full solver otherwise. `a` is overwritten.
EigenPairs<double> lowest_eigenpairs_double(Eigen::MatrixXd a, Eigen::Index count);
}  // namespace detail

/// The `count` smallest eigenpairs of the symmetric matrix `a` (lower
/// triangle is referenced).
template <typename Derived>
EigenPairs<typename Derived::Scalar> lowest_eigenpairs(const Eigen::MatrixBase<Derived>& a,
                                                       Eigen::Index count) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols())
    throw Error(ErrorKind::DimensionMismatch, "eigenproblem matrix must be square");
  if (count < 0 || count > a.rows())
    throw Error(ErrorKind::RankDeficient, "requested more eigenpairs than the matrix order");
  if constexpr (std::is_same_v<Scalar, double>) {
    return detail::lowest_eigenpairs_double(a.eval(), count);
  } else {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Eigen::SelfAdjointEigenSolver<Matrix> solver{Matrix(a)};
    if (solver.info() != Eigen::Success)
      throw Error(ErrorKind::NonFiniteValue, "symmetric eigensolver did not converge");
    return {solver.eigenvalues().head(count), solver.eigenvectors().leftCols(count)};
  }
}

}  // namespace sle

#endif  // SLE_SYM_EIGEN_HPP
