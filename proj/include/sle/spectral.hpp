#ifndef SLE_SPECTRAL_HPP
#define SLE_SPECTRAL_HPP

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "sle/error.hpp"
#include "sle/sym_eigen.hpp"

namespace sle {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Graph Laplacian L = D - S of a similarity matrix.
///
/// `degree` holds the diagonal of D used by the XᵀDX = I constraint. Rows
/// with zero degree get a small positive floor there so that D stays
/// invertible; L itself is built from the raw degrees and keeps zero row sums.
template <typename Scalar>
struct Laplacian {
  MatrixX<Scalar> matrix;
  VectorX<Scalar> degree;

  Eigen::Index size() const { return matrix.rows(); }
};

inline constexpr double kDegreeFloor = 1e-8;

/// Computes L·X, through a sparse copy of L when few entries are nonzero.
template <typename Scalar>
class LaplacianProduct {
 public:
  explicit LaplacianProduct(const Laplacian<Scalar>& lap, double max_density = 0.3) : dense_(lap.matrix) {
    const auto n = lap.matrix.size();
    const auto nnz = (lap.matrix.array() != Scalar(0)).count();
    if (n > 0 && static_cast<double>(nnz) <= max_density * static_cast<double>(n)) {
      sparse_ = lap.matrix.sparseView();
      use_sparse_ = true;
    }
  }

  MatrixX<Scalar> operator()(const MatrixX<Scalar>& x) const {
    if (use_sparse_) return sparse_ * x;
    return dense_ * x;
  }

 private:
  const MatrixX<Scalar>& dense_;
  Eigen::SparseMatrix<Scalar> sparse_;
  bool use_sparse_ = false;
};

template <typename Derived>
Laplacian<typename Derived::Scalar> build_laplacian(const Eigen::MatrixBase<Derived>& similarity) {
  using Scalar = typename Derived::Scalar;
  if (similarity.rows() != similarity.cols())
    throw Error(ErrorKind::DimensionMismatch, "similarity matrix must be square");
  const Scalar asym = (similarity - similarity.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= Scalar(1e-12)))
    throw Error(ErrorKind::NonSymmetricInput,
                "max |S - S^T| = " + std::to_string(static_cast<double>(asym)));

  Laplacian<Scalar> lap;
  const VectorX<Scalar> raw_degree = similarity.rowwise().sum();
  lap.matrix = -similarity;
  lap.matrix.diagonal() += raw_degree;
  lap.degree = raw_degree.unaryExpr(
      [](Scalar d) { return d == Scalar(0) ? Scalar(kDegreeFloor) : d; });
  return lap;
}

/// Φ(X) = tr(XᵀLX), which equals half the pairwise sum Σ_ij ‖X_i − X_j‖² S_ij.
template <typename Derived, typename Scalar>
Scalar objective_phi(const Eigen::MatrixBase<Derived>& x, const Laplacian<Scalar>& lap) {
  if (x.rows() != lap.size())
    throw Error(ErrorKind::DimensionMismatch, "embedding rows do not match the Laplacian");
  return (x.derived().cwiseProduct(lap.matrix * x)).sum();
}

/// ∂Φ/∂X = 2LX.
template <typename Derived, typename Scalar>
MatrixX<Scalar> phi_gradient(const Eigen::MatrixBase<Derived>& x, const Laplacian<Scalar>& lap) {
  if (x.rows() != lap.size())
    throw Error(ErrorKind::DimensionMismatch, "embedding rows do not match the Laplacian");
  return Scalar(2) * (lap.matrix * x);
}

/// ‖XᵀDX − I‖_F
template <typename Derived, typename Scalar>
Scalar constraint_residual(const Eigen::MatrixBase<Derived>& x, const VectorX<Scalar>& degree) {
  const MatrixX<Scalar> gram = x.transpose() * degree.asDiagonal() * x;
  return (gram - MatrixX<Scalar>::Identity(gram.rows(), gram.cols())).norm();
}

/// Closest D-orthonormal matrix: X (XᵀDX)^{-1/2}.
template <typename Derived, typename Scalar>
MatrixX<Scalar> d_orthonormalize(const Eigen::MatrixBase<Derived>& x,
                                 const VectorX<Scalar>& degree) {
  const MatrixX<Scalar> gram = x.transpose() * degree.asDiagonal() * x;
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(gram);
  const auto& ev = es.eigenvalues();
  if (!(ev.minCoeff() > ev.maxCoeff() * std::numeric_limits<Scalar>::epsilon() * 16))
    throw Error(ErrorKind::RankDeficient, "embedding columns are linearly dependent under D");
  const MatrixX<Scalar> inv_sqrt =
      es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  return x * inv_sqrt;
}

/// Removes each column's component along the constant vector in the D inner
/// product. That direction is the trivial eigenvector with Φ = 0.
template <typename Derived, typename Scalar>
MatrixX<Scalar> remove_trivial(const Eigen::MatrixBase<Derived>& x, const VectorX<Scalar>& degree) {
  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> mean = (degree.transpose() * x) / degree.sum();
  return x.rowwise() - mean;
}

/// Flips each column so that its largest-magnitude entry is positive.
template <typename Scalar>
void fix_column_signs(MatrixX<Scalar>& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    Eigen::Index arg = 0;
    x.col(j).cwiseAbs().maxCoeff(&arg);
    if (x(arg, j) < Scalar(0)) x.col(j) = -x.col(j);
  }
}

/// Lowest non-trivial solutions of Lx = λDx, D-orthonormal.
///
/// Works on N = D^{-1/2} L D^{-1/2}. The trivial direction u ∝ D^{1/2}1 is an
/// exact null vector of N; it is shifted above the spectrum by adding c·uuᵀ
/// so that the l smallest eigenpairs of the shifted matrix are the wanted
/// ones, including for disconnected graphs with several zero eigenvalues.
template <typename Scalar>
MatrixX<Scalar> solve_eigenmap(const Laplacian<Scalar>& lap, Eigen::Index dims,
                               VectorX<Scalar>* eigenvalues = nullptr) {
  const Eigen::Index m = lap.size();
  if (dims < 1 || dims > m - 2)
    throw Error(ErrorKind::RankDeficient, "embedding dimension " + std::to_string(dims) +
                                              " outside [1, m-2] for m = " + std::to_string(m));
  const VectorX<Scalar> inv_sqrt_d = lap.degree.cwiseSqrt().cwiseInverse();
  MatrixX<Scalar> n = inv_sqrt_d.asDiagonal() * lap.matrix * inv_sqrt_d.asDiagonal();
  n = (Scalar(0.5) * (n + n.transpose())).eval();

  const VectorX<Scalar> u = lap.degree.cwiseSqrt().normalized();
  const Scalar shift = n.cwiseAbs().rowwise().sum().maxCoeff() + Scalar(1);
  n.noalias() += shift * u * u.transpose();

  auto pairs = lowest_eigenpairs(n, dims);
  if (!pairs.values.allFinite())
    throw Error(ErrorKind::NonFiniteValue, "eigenvalues are not finite");
  if (eigenvalues) *eigenvalues = pairs.values;

  MatrixX<Scalar> x = inv_sqrt_d.asDiagonal() * pairs.vectors;
  fix_column_signs(x);
  return x;
}

template <typename Scalar>
struct DescentResult {
  MatrixX<Scalar> embedding;
  Scalar objective{};
  int accepted_steps = 0;
};

namespace detail {

/// Riemannian descent direction on {XᵀDX = I} in the D-metric for the
/// Euclidean gradient `grad`: D⁻¹G − X sym(XᵀG). Vanishes at generalized
/// eigenvector solutions of Φ.
template <typename Scalar>
MatrixX<Scalar> tangent_direction(const MatrixX<Scalar>& x, const MatrixX<Scalar>& grad,
                                  const VectorX<Scalar>& degree) {
  const MatrixX<Scalar> xtg = x.transpose() * grad;
  const MatrixX<Scalar> sym = Scalar(0.5) * (xtg + xtg.transpose());
  return degree.cwiseInverse().asDiagonal() * grad - x * sym;
}

}  // namespace detail

/// Projected gradient descent on Φ under XᵀDX = I, restricted like
/// solve_eigenmap to embeddings D-orthogonal to the constant vector. Each step follows the
/// gradient 2LX (D-preconditioned and projected onto the constraint's tangent
/// space), then re-imposes the constraint. A step that raises Φ is halved
/// until it does not; when no halving helps, descent stops. `tolerance` > 0
/// also stops once the relative decrease of a step falls below it.
template <typename Scalar>
DescentResult<Scalar> descend_eigenmap(const Laplacian<Scalar>& lap, const MatrixX<Scalar>& init,
                                       int steps, Scalar step_size, Scalar tolerance = Scalar(0),
                                       int max_halvings = 40) {
  if (init.rows() != lap.size())
    throw Error(ErrorKind::DimensionMismatch, "initial embedding rows do not match the Laplacian");
  DescentResult<Scalar> out;
  out.embedding = d_orthonormalize(remove_trivial(init, lap.degree), lap.degree);
  out.objective = objective_phi(out.embedding, lap);
  if (!std::isfinite(static_cast<double>(out.objective)))
    throw Error(ErrorKind::NonFiniteValue, "objective is not finite");
  if (step_size <= Scalar(0)) return out;

  for (int s = 0; s < steps; ++s) {
    const MatrixX<Scalar> dir =
        detail::tangent_direction(out.embedding, phi_gradient(out.embedding, lap), lap.degree);
    Scalar eta = step_size;
    bool accepted = false;
    for (int h = 0; h <= max_halvings; ++h, eta *= Scalar(0.5)) {
      MatrixX<Scalar> trial =
          d_orthonormalize(remove_trivial(out.embedding - eta * dir, lap.degree), lap.degree);
      const Scalar value = objective_phi(trial, lap);
      if (!std::isfinite(static_cast<double>(value)))
        throw Error(ErrorKind::NonFiniteValue, "objective is not finite");
      if (value <= out.objective) {
        const Scalar decrease = out.objective - value;
        out.embedding = std::move(trial);
        out.objective = value;
        ++out.accepted_steps;
        accepted = true;
        if (tolerance > Scalar(0) && decrease <= tolerance * std::abs(value)) return out;
        break;
      }
    }
    if (!accepted) break;
  }
  return out;
}

}  // namespace sle

#endif  // SLE_SPECTRAL_HPP
