#ifndef SLE_LSI_HPP
#define SLE_LSI_HPP

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sle/text.hpp"

namespace sle {

/// Documents x vocabulary matrix of raw counts or TF-IDF weights.
struct TermDocumentMatrix {
  std::vector<std::string> vocabulary;  // sorted
  Eigen::VectorXd idf;                  // ln(m / df); ones for raw counts
  Eigen::MatrixXd weights;
  bool tfidf = true;

  /// Weights for new documents against this vocabulary and idf; unknown
  /// tokens are ignored.
  Eigen::MatrixXd transform(const std::vector<Document>& docs) const;
};

/// tf = raw count, idf = ln(m / df), weight = tf·idf. Throws EmptyVocabulary.
TermDocumentMatrix build_tfidf(const std::vector<Document>& corpus, bool tfidf = true);

/// Truncated SVD of a term-document matrix: document coordinates U_l Σ_l and
/// the term basis V_l used to project unseen documents.
struct LsiModel {
  Eigen::MatrixXd document_embedding;
  Eigen::MatrixXd term_basis;
  Eigen::VectorXd singular_values;

  /// rows · V_l; reproduces `document_embedding` for the fitted rows.
  Eigen::MatrixXd project(const Eigen::MatrixXd& weights) const { return weights * term_basis; }
};

/// Rank-l LSI. Columns are signed so the largest-magnitude entry of each U
/// column is positive. Throws RankDeficient when l > min(m, V).
LsiModel lsi_embed(const Eigen::MatrixXd& weights, Eigen::Index dims);

}  // namespace sle

#endif  // SLE_LSI_HPP
