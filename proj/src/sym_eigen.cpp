#include "sle/sym_eigen.hpp"

#ifdef SLE_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace sle::detail {

EigenPairs<double> lowest_eigenpairs_double(Eigen::MatrixXd a, Eigen::Index count) {
  const Eigen::Index n = a.rows();
  if (count == 0) return {Eigen::VectorXd(0), Eigen::MatrixXd(n, 0)};
#ifdef SLE_HAVE_LAPACKE
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, count);
  Eigen::Matrix<lapack_int, Eigen::Dynamic, 1> support(2 * count);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'L', static_cast<lapack_int>(n), a.data(),
      static_cast<lapack_int>(n), 0.0, 0.0, 1, static_cast<lapack_int>(count), 0.0, &found,
      values.data(), vectors.data(), static_cast<lapack_int>(n), support.data());
  if (info != 0 || found != count)
    throw Error(ErrorKind::NonFiniteValue, "dsyevr failed with info " + std::to_string(info));
  return {values.head(count), vectors};
#else
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::NonFiniteValue, "symmetric eigensolver did not converge");
  return {solver.eigenvalues().head(count), solver.eigenvectors().leftCols(count)};
#endif
}

}  // namespace sle::detail
