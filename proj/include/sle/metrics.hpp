#ifndef SLE_METRICS_HPP
#define SLE_METRICS_HPP

#include <span>

namespace sle {

struct ConfusionCounts {
  long tp = 0, fp = 0, tn = 0, fn = 0;

  long total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

/// Mann-Whitney AUC: fraction of positive/negative pairs ranked correctly,
/// ties counting 1/2. Throws SingleClass unless both labels occur.
double compute_auc(std::span<const double> scores, std::span<const int> labels);

/// Matthews correlation; 0 when any marginal is empty.
double compute_mcc(const ConfusionCounts& c);

/// Counts with "positive" meaning score > threshold.
ConfusionCounts confusion_at(std::span<const double> scores, std::span<const int> labels,
                             double threshold);

struct ThresholdChoice {
  double threshold = 0.0;
  ConfusionCounts counts;
  double mcc = 0.0;
};

/// Sweeps -inf, the midpoints between consecutive distinct scores, and +inf;
/// returns the MCC maximizer, lowest threshold on ties.
ThresholdChoice best_mcc_threshold(std::span<const double> scores, std::span<const int> labels);

/// Diagnostic summary at one operating point.
struct OperatingPoint {
  double mcc = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double lr_plus = 0.0;   // sensitivity / (1 - specificity)
  double lr_minus = 0.0;  // (1 - sensitivity) / specificity
};

/// Ratios with a zero denominator are +inf, or 1 when the numerator is 0 too.
OperatingPoint operating_point(const ConfusionCounts& c);

}  // namespace sle

#endif  // SLE_METRICS_HPP
