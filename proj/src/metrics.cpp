#include "sle/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "sle/error.hpp"

namespace sle {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw Error(ErrorKind::DimensionMismatch, "scores and labels differ in length");
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y == 1)
      pos = true;
    else if (y == 0)
      neg = true;
    else
      throw Error(ErrorKind::SchemaError, "labels must be 0 or 1");
  }
  if (!pos || !neg) throw Error(ErrorKind::SingleClass, "both classes are required");
}

double ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

}  // namespace

double compute_auc(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

  // midranks over tie groups
  double positive_rank_sum = 0.0;
  long positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t q = i; q < j; ++q)
      if (labels[order[q]] == 1) {
        positive_rank_sum += midrank;
        ++positives;
      }
    i = j;
  }
  const auto p = static_cast<double>(positives);
  const auto q = static_cast<double>(static_cast<long>(n) - positives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

double compute_mcc(const ConfusionCounts& c) {
  const double tp = c.tp, fp = c.fp, tn = c.tn, fn = c.fn;
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(den);
}

ConfusionCounts confusion_at(std::span<const double> scores, std::span<const int> labels,
                             double threshold) {
  ConfusionCounts c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] > threshold;
    if (labels[i] == 1)
      (predicted ? c.tp : c.fn)++;
    else
      (predicted ? c.fp : c.tn)++;
  }
  return c;
}

ThresholdChoice best_mcc_threshold(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<double> thresholds;
  thresholds.reserve(sorted.size() + 1);
  thresholds.push_back(-std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    thresholds.push_back(0.5 * (sorted[i] + sorted[i + 1]));
  thresholds.push_back(std::numeric_limits<double>::infinity());

  // sweep ascending: moving past a distinct score turns its samples negative
  long pos_total = 0, neg_total = 0;
  for (int y : labels) (y == 1 ? pos_total : neg_total)++;
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

  ConfusionCounts c{pos_total, neg_total, 0, 0};
  ThresholdChoice best{thresholds.front(), c, compute_mcc(c)};
  std::size_t cursor = 0;
  for (std::size_t t = 1; t < thresholds.size(); ++t) {
    while (cursor < order.size() && scores[order[cursor]] <= thresholds[t]) {
      if (labels[order[cursor]] == 1) {
        --c.tp;
        ++c.fn;
      } else {
        --c.fp;
        ++c.tn;
      }
      ++cursor;
    }
    const double mcc = compute_mcc(c);
    if (mcc > best.mcc) best = {thresholds[t], c, mcc};
  }
  return best;
}

OperatingPoint operating_point(const ConfusionCounts& c) {
  OperatingPoint op;
  op.mcc = compute_mcc(c);
  op.sensitivity = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
  op.specificity = ratio(static_cast<double>(c.tn), static_cast<double>(c.tn + c.fp));
  op.lr_plus = ratio(op.sensitivity, 1.0 - op.specificity);
  op.lr_minus = ratio(1.0 - op.sensitivity, op.specificity);
  return op;
}

}  // namespace sle
