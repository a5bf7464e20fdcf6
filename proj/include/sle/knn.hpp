#ifndef SLE_KNN_HPP
#define SLE_KNN_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "sle/error.hpp"
#include "sle/similarity.hpp"
#include "sle/spectral.hpp"

namespace sle {

/// Top-k training documents for one query, most similar first; equal
/// similarities are ordered by training index.
struct NeighborSet {
  std::vector<Eigen::Index> indices;
  std::vector<double> similarities;

  std::size_t k() const { return indices.size(); }
};

template <typename Derived>
NeighborSet find_neighbors(const Eigen::MatrixBase<Derived>& similarity_row, std::size_t k) {
  const auto n = static_cast<std::size_t>(similarity_row.size());
  if (k < 1) throw Error(ErrorKind::KTooLarge, "k must be at least 1");
  if (k > n)
    throw Error(ErrorKind::KTooLarge,
                "k = " + std::to_string(k) + " exceeds training size " + std::to_string(n));
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto before = [&](Eigen::Index a, Eigen::Index b) {
    const double sa = static_cast<double>(similarity_row(a)), sb = static_cast<double>(similarity_row(b));
    return sa != sb ? sa > sb : a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), before);
  NeighborSet out;
  out.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  for (auto i : out.indices) out.similarities.push_back(static_cast<double>(similarity_row(i)));
  return out;
}

inline NeighborSet find_neighbors(const Document& query, const std::vector<Document>& training,
                                  const MatchContext& ctx, std::size_t k) {
  if (training.empty()) throw Error(ErrorKind::KTooLarge, "training corpus is empty");
  Eigen::VectorXd row(static_cast<Eigen::Index>(training.size()));
  for (std::size_t j = 0; j < training.size(); ++j)
    row(static_cast<Eigen::Index>(j)) = document_similarity(query, training[j], ctx);
  return find_neighbors(row, k);
}

/// Mean of the neighbors' embedding rows.
template <typename Scalar>
VectorX<Scalar> estimate_average(const NeighborSet& neighbors, const MatrixX<Scalar>& embedding) {
  VectorX<Scalar> sum = VectorX<Scalar>::Zero(embedding.cols());
  for (auto i : neighbors.indices) sum += embedding.row(i).transpose();
  return sum / static_cast<Scalar>(neighbors.k());
}

/// Similarity-weighted mean of the neighbors' rows; the zero vector when all
/// neighbor similarities are 0. Equal positive weights give exactly the
/// plain mean.
template <typename Scalar>
VectorX<Scalar> estimate_weighted(const NeighborSet& neighbors, const MatrixX<Scalar>& embedding) {
  const auto& sims = neighbors.similarities;
  if (!sims.empty() && sims.front() > 0.0 &&
      std::all_of(sims.begin(), sims.end(), [&](double s) { return s == sims.front(); }))
    return estimate_average(neighbors, embedding);
  VectorX<Scalar> sum = VectorX<Scalar>::Zero(embedding.cols());
  Scalar rho(0);
  for (std::size_t j = 0; j < neighbors.k(); ++j) {
    const auto s = static_cast<Scalar>(neighbors.similarities[j]);
    sum += s * embedding.row(neighbors.indices[j]).transpose();
    rho += s;
  }
  if (rho > Scalar(0)) return sum / rho;
  return VectorX<Scalar>::Zero(embedding.cols());
}

struct KnnOptions {
  std::size_t k = 5;
  bool weighted = true;
};

/// Estimated embeddings for every query row of `similarities` (queries x
/// training). `zero_weight_count`, when given, receives how many queries hit
/// the all-zero-similarity case of the weighted estimator.
template <typename Scalar>
MatrixX<Scalar> estimate_embeddings(const Eigen::MatrixXd& similarities,
                                    const MatrixX<Scalar>& embedding, const KnnOptions& opts,
                                    std::size_t* zero_weight_count = nullptr) {
  if (similarities.cols() != embedding.rows())
    throw Error(ErrorKind::DimensionMismatch, "similarity columns do not match training rows");
  MatrixX<Scalar> out(similarities.rows(), embedding.cols());
  std::size_t zero = 0;
  for (Eigen::Index q = 0; q < similarities.rows(); ++q) {
    const NeighborSet nb = find_neighbors(similarities.row(q), opts.k);
    if (opts.weighted) {
      if (std::all_of(nb.similarities.begin(), nb.similarities.end(), [](double s) { return s <= 0.0; }))
        ++zero;
      out.row(q) = estimate_weighted(nb, embedding).transpose();
    } else {
      out.row(q) = estimate_average(nb, embedding).transpose();
    }
  }
  if (zero_weight_count) *zero_weight_count = zero;
  return out;
}

}  // namespace sle

#endif  // SLE_KNN_HPP
