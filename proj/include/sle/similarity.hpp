#ifndef SLE_SIMILARITY_HPP
#define SLE_SIMILARITY_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sle/text.hpp"
#include "sle/transform.hpp"

namespace sle {

/// Everything statement matching depends on.
struct MatchContext {
  TransformWeights weights;
  TransformationDictionary dictionary;
  std::size_t max_tokens = 12;
};

/// Symmetric document similarity matrix with unit diagonal.
struct SimilarityMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> ids;

  Eigen::Index size() const { return values.rows(); }
};

/// Best consistent pairing score for a precomputed statement-similarity table
/// `pairwise` (rows: statements of the first document). Exhaustive over
/// injective pairings; paired scores are summed in ascending order so the
/// value does not depend on which document comes first.
double best_pairing_score(const Eigen::MatrixXd& pairwise);

/// Sum over the best pairing divided by the larger statement count.
double document_similarity(const Document& d1, const Document& d2, const MatchContext& ctx);

/// Memoizes statement similarities by token content.
class StatementCache {
 public:
  explicit StatementCache(const MatchContext& ctx) : ctx_(&ctx) {}

  double similarity(const Statement& a, const Statement& b);
  double document_similarity(const Document& d1, const Document& d2);
  std::size_t size() const { return table_.size(); }

 private:
  std::size_t intern(const Statement& s);

  const MatchContext* ctx_;
  std::map<Statement, std::size_t> index_;
  std::vector<const Statement*> statements_;
  std::unordered_map<std::uint64_t, double> table_;
};

/// Fills the upper triangle pair by pair and mirrors it; the diagonal is 1.
SimilarityMatrix build_similarity_matrix(const std::vector<Document>& corpus,
                                         const MatchContext& ctx);

/// Similarities of each query document to each reference document
/// (queries x references).
Eigen::MatrixXd cross_similarity(const std::vector<Document>& queries,
                                 const std::vector<Document>& references,
                                 const MatchContext& ctx);

}  // namespace sle

#endif  // SLE_SIMILARITY_HPP
