#ifndef SLE_CROSS_VALIDATION_HPP
#define SLE_CROSS_VALIDATION_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sle/dataset.hpp"
#include "sle/model.hpp"

namespace sle {

struct CvConfig {
  int folds = 5;
  std::uint64_t seed = 0;
  /// Embed test documents together with training documents (LE and LSI
  /// only). Off by default: test embeddings are then estimated from training
  /// documents alone.
  bool joint_embed = false;
};

/// Fold index per sample: each class is shuffled with `seed` and dealt
/// round-robin, so every fold holds its share of each class within one.
std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, std::uint64_t seed);

struct FoldResult {
  double auc = 0.0;
  double mcc = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double lr_plus = 0.0;
  double lr_minus = 0.0;
  /// Chosen on the training scores, applied to the test scores.
  double threshold = 0.0;
  double train_auc = 0.0;
  int attempts = 0;
  std::size_t zero_weight_estimates = 0;
};

struct FoldPrediction {
  std::string id;
  int fold = 0;
  int label = 0;
  double score = 0.0;
};

struct EvalReport {
  Method method = Method::Numeric;
  Eigen::Index dims = 0;
  std::vector<FoldResult> folds;
  FoldResult mean;
  std::vector<FoldPrediction> predictions;
};

/// k-fold evaluation of one method. `similarity`, when given, is the full
/// document similarity matrix of `data` (reused for every fold); otherwise it
/// is computed once when the method needs it. Throws FoldTooSmall when a
/// fold's training or test part lacks a class.
EvalReport cross_validate(const Dataset& data, const MethodConfig& method, const CvConfig& cv,
                          const MatchContext& ctx, const Eigen::MatrixXd* similarity = nullptr);

/// Per-fold rows plus a "mean" row.
void write_report_csv(std::ostream& out, const EvalReport& report);
void write_predictions_csv(std::ostream& out, const EvalReport& report);
/// Human-readable summary.
void write_report_text(std::ostream& out, const EvalReport& report);

}  // namespace sle

#endif  // SLE_CROSS_VALIDATION_HPP
