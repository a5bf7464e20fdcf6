#ifndef SLE_MODEL_HPP
#define SLE_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sle/dataset.hpp"
#include "sle/knn.hpp"
#include "sle/logistic.hpp"
#include "sle/lsi.hpp"
#include "sle/similarity.hpp"
#include "sle/supervised.hpp"

namespace sle {

/// How the text field enters the classifier.
enum class Method { Numeric, LE, SLE, LSI };

std::string_view method_name(Method m);
/// Accepts numeric, le, sle, lsi (case-insensitive); throws InvalidConfig.
Method parse_method(std::string_view name);

struct MethodConfig {
  Method method = Method::SLE;
  Eigen::Index dims = 20;
  KnnOptions knn;
  SleConfig<double> sle;  // dims and l2 are overridden by the fields here
  double l2 = 1e-3;
  bool tfidf = true;
  /// Retrain with a new seed while the training AUC stays below this.
  double retrain_auc = 0.65;
  int max_attempts = 5;
};

/// A trained classifier plus everything needed to featurize new records.
struct FittedModel {
  Method method = Method::Numeric;
  Eigen::Index dims = 0;
  KnnOptions knn;

  Eigen::VectorXd numeric_mean, numeric_scale;
  LearnerParams<double> params;

  // LE / SLE
  std::vector<Document> train_documents;
  Eigen::MatrixXd train_embedding;
  double embed_scale = 1.0;
  double lambda = 0.0;
  std::vector<double> objective_trace;
  bool degenerate_lambda = false;

  // LSI
  TermDocumentMatrix vocabulary;  // vocabulary and idf only; weights are not kept
  Eigen::MatrixXd term_basis;
  Eigen::VectorXd lsi_mean, lsi_scale;

  // diagnostics
  double train_auc = 0.0;
  int attempts = 0;
  std::uint64_t seed = 0;
};

/// Training rows for fit_model.
struct TrainingSet {
  const Eigen::MatrixXd& numeric;
  const std::vector<int>& labels;
  const std::vector<Document>& documents;
  /// Train x train document similarities; computed when null and needed.
  const Eigen::MatrixXd* similarity = nullptr;
};

/// Fits one method, applying the retrain rule: while the training AUC is
/// below `retrain_auc`, refit with a fresh seed, at most `max_attempts` times.
FittedModel fit_model(const TrainingSet& train, const MethodConfig& config,
                      const MatchContext& ctx, std::uint64_t seed);

struct Prediction {
  Eigen::VectorXd probabilities;
  std::size_t zero_weight_estimates = 0;
};

/// Scores new records. `cross_similarity` (queries x training documents) is
/// computed when null and the method needs it.
Prediction predict(const FittedModel& model, const Eigen::MatrixXd& numeric,
                   const std::vector<Document>& documents, const MatchContext& ctx,
                   const Eigen::MatrixXd* cross_similarity = nullptr);

/// In-sample probabilities for the rows the model was fitted on, using the
/// stored training features rather than out-of-sample estimates.
Eigen::VectorXd training_probabilities(const FittedModel& model, const Eigen::MatrixXd& numeric,
                                       const std::vector<Document>& documents);

/// Column mean and population standard deviation (1 for constant columns).
void column_standardizer(const Eigen::MatrixXd& x, Eigen::VectorXd& mean, Eigen::VectorXd& scale);
Eigen::MatrixXd standardize(const Eigen::MatrixXd& x, const Eigen::VectorXd& mean,
                            const Eigen::VectorXd& scale);

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace sle

#endif  // SLE_MODEL_HPP
