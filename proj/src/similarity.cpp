#include "sle/similarity.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "sle/error.hpp"

namespace sle {

double best_pairing_score(const Eigen::MatrixXd& pairwise) {
  // Walk injective maps from the shorter side into the longer side; unpaired
  // statements score 0 and similarities are non-negative, so full maps of the
  // shorter side reach the maximum.
  const bool transpose = pairwise.rows() > pairwise.cols();
  const Eigen::MatrixXd table = transpose ? Eigen::MatrixXd(pairwise.transpose()) : pairwise;
  const Eigen::Index rows = table.rows(), cols = table.cols();
  if (rows == 0) return 0.0;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(cols));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> picked(static_cast<std::size_t>(rows));
  double best = 0.0;
  // permutations of the longer side; the first `rows` entries give the map
  do {
    for (Eigen::Index j = 0; j < rows; ++j) picked[j] = table(j, order[j]);
    std::sort(picked.begin(), picked.end());
    double sum = 0.0;
    for (double v : picked) sum += v;
    best = std::max(best, sum);
    // skip permutations that only reorder the unused tail
    std::reverse(order.begin() + rows, order.end());
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

namespace {

template <typename StatementSim>
double document_similarity_impl(const Document& d1, const Document& d2, StatementSim&& sim) {
  if (d1.is_sentinel() || d2.is_sentinel()) return 0.0;
  const auto r1 = static_cast<Eigen::Index>(d1.statements.size());
  const auto r2 = static_cast<Eigen::Index>(d2.statements.size());
  Eigen::MatrixXd pairwise(r1, r2);
  for (Eigen::Index j = 0; j < r1; ++j)
    for (Eigen::Index l = 0; l < r2; ++l) pairwise(j, l) = sim(d1.statements[j], d2.statements[l]);
  return best_pairing_score(pairwise) / static_cast<double>(std::max(r1, r2));
}

}  // namespace

double document_similarity(const Document& d1, const Document& d2, const MatchContext& ctx) {
  return document_similarity_impl(d1, d2, [&](const Statement& a, const Statement& b) {
    return statement_similarity(a, b, ctx.weights, ctx.dictionary, ctx.max_tokens);
  });
}

std::size_t StatementCache::intern(const Statement& s) {
  auto [it, inserted] = index_.try_emplace(s, statements_.size());
  if (inserted) statements_.push_back(&it->first);
  return it->second;
}

double StatementCache::similarity(const Statement& a, const Statement& b) {
  auto ia = intern(a), ib = intern(b);
  if (ia > ib) std::swap(ia, ib);
  auto [it, inserted] = table_.try_emplace((std::uint64_t{ia} << 32) | ib, 0.0);
  if (inserted)
    it->second = statement_similarity(*statements_[ia], *statements_[ib], ctx_->weights,
                                      ctx_->dictionary, ctx_->max_tokens);
  return it->second;
}

double StatementCache::document_similarity(const Document& d1, const Document& d2) {
  return document_similarity_impl(
      d1, d2, [&](const Statement& a, const Statement& b) { return similarity(a, b); });
}

SimilarityMatrix build_similarity_matrix(const std::vector<Document>& corpus,
                                         const MatchContext& ctx) {
  const auto m = static_cast<Eigen::Index>(corpus.size());
  SimilarityMatrix out;
  out.values = Eigen::MatrixXd::Identity(m, m);
  out.ids.reserve(corpus.size());
  for (const auto& d : corpus) out.ids.push_back(d.id);

  StatementCache cache(ctx);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index k = i + 1; k < m; ++k) {
      const double s = cache.document_similarity(corpus[i], corpus[k]);
      out.values(i, k) = s;
      out.values(k, i) = s;
    }
  }
  return out;
}

Eigen::MatrixXd cross_similarity(const std::vector<Document>& queries,
                                 const std::vector<Document>& references,
                                 const MatchContext& ctx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(queries.size()),
                      static_cast<Eigen::Index>(references.size()));
  StatementCache cache(ctx);
  for (std::size_t q = 0; q < queries.size(); ++q)
    for (std::size_t r = 0; r < references.size(); ++r)
      out(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(r)) =
          cache.document_similarity(queries[q], references[r]);
  return out;
}

}  // namespace sle
