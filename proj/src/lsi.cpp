#include "sle/lsi.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sle/error.hpp"

namespace sle {

namespace {

Eigen::MatrixXd count_matrix(const std::vector<Document>& docs,
                             const std::vector<std::string>& vocabulary) {
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(docs.size()),
                                                 static_cast<Eigen::Index>(vocabulary.size()));
  for (std::size_t d = 0; d < docs.size(); ++d)
    for (const auto& st : docs[d].statements)
      for (const auto& tok : st.tokens) {
        auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), tok);
        if (it != vocabulary.end() && *it == tok)
          counts(static_cast<Eigen::Index>(d), it - vocabulary.begin()) += 1.0;
      }
  return counts;
}

}  // namespace

Eigen::MatrixXd TermDocumentMatrix::transform(const std::vector<Document>& docs) const {
  return count_matrix(docs, vocabulary) * idf.asDiagonal();
}

TermDocumentMatrix build_tfidf(const std::vector<Document>& corpus, bool tfidf) {
  std::set<std::string> vocab;
  for (const auto& d : corpus)
    for (const auto& st : d.statements) vocab.insert(st.tokens.begin(), st.tokens.end());
  if (vocab.empty()) throw Error(ErrorKind::EmptyVocabulary, "corpus has no tokens");

  TermDocumentMatrix tdm;
  tdm.tfidf = tfidf;
  tdm.vocabulary.assign(vocab.begin(), vocab.end());
  const Eigen::MatrixXd counts = count_matrix(corpus, tdm.vocabulary);
  const auto m = static_cast<double>(corpus.size());
  tdm.idf = Eigen::VectorXd::Ones(counts.cols());
  if (tfidf) {
    for (Eigen::Index t = 0; t < counts.cols(); ++t) {
      const auto df = static_cast<double>((counts.col(t).array() > 0.0).count());
      tdm.idf(t) = std::log(m / df);
    }
  }
  tdm.weights = counts * tdm.idf.asDiagonal();
  return tdm;
}

LsiModel lsi_embed(const Eigen::MatrixXd& weights, Eigen::Index dims) {
  if (dims < 1 || dims > std::min(weights.rows(), weights.cols()))
    throw Error(ErrorKind::RankDeficient,
                "LSI dimension " + std::to_string(dims) + " exceeds min(m, V)");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(weights, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw Error(ErrorKind::NonFiniteValue, "SVD failed");

  LsiModel model;
  model.singular_values = svd.singularValues().head(dims);
  Eigen::MatrixXd u = svd.matrixU().leftCols(dims);
  model.term_basis = svd.matrixV().leftCols(dims);
  for (Eigen::Index j = 0; j < dims; ++j) {
    Eigen::Index arg = 0;
    u.col(j).cwiseAbs().maxCoeff(&arg);
    if (u(arg, j) < 0.0) {
      u.col(j) *= -1.0;
      model.term_basis.col(j) *= -1.0;
    }
  }
  model.document_embedding = u * model.singular_values.asDiagonal();
  return model;
}

}  // namespace sle
