#include "sle/cross_validation.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include "sle/error.hpp"
#include "sle/metrics.hpp"

namespace sle {

std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw Error(ErrorKind::InvalidConfig, "need at least 2 folds");
  std::vector<int> assignment(labels.size(), 0);
  std::mt19937_64 rng(seed);
  int next = 0;
  for (int cls : {1, 0}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(i);
    // Fisher-Yates with explicit draws so the order does not depend on the
    // standard library's shuffle implementation
    for (std::size_t i = members.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(members[i - 1], members[j]);
    }
    for (auto i : members) {
      assignment[i] = next;
      next = (next + 1) % folds;
    }
  }
  return assignment;
}

namespace {

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

Eigen::MatrixXd take_block(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& rows,
                           const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x(rows[i], cols[j]);
  return out;
}

template <typename T>
std::vector<T> take(const std::vector<T>& v, const std::vector<Eigen::Index>& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[static_cast<std::size_t>(i)]);
  return out;
}

bool has_both(const std::vector<int>& labels) {
  return std::find(labels.begin(), labels.end(), 0) != labels.end() &&
         std::find(labels.begin(), labels.end(), 1) != labels.end();
}

std::span<const double> view(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Text features for every document at once (joint-embedding mode).
Eigen::MatrixXd joint_text_features(const Dataset& data, const MethodConfig& method,
                                    const Eigen::MatrixXd* similarity) {
  if (method.method == Method::LE) {
    const auto lap = build_laplacian(*similarity);
    return std::sqrt(lap.degree.sum()) * solve_eigenmap(lap, method.dims);
  }
  const TermDocumentMatrix tdm = build_tfidf(data.documents, method.tfidf);
  const LsiModel lsi = lsi_embed(tdm.weights, method.dims);
  Eigen::VectorXd mean, scale;
  column_standardizer(lsi.document_embedding, mean, scale);
  return standardize(lsi.document_embedding, mean, scale);
}

struct FoldScores {
  Eigen::VectorXd train, test;
  double train_auc = 0.0;
  int attempts = 0;
  std::size_t zero_weight = 0;
};

FoldScores joint_fold(const Dataset& data, const Eigen::MatrixXd& text, const MethodConfig& method,
                      const std::vector<Eigen::Index>& tr, const std::vector<Eigen::Index>& te,
                      const std::vector<int>& train_labels, std::uint64_t seed) {
  Eigen::VectorXd mean, scale;
  const Eigen::MatrixXd num_tr = take_rows(data.numeric, tr);
  column_standardizer(num_tr, mean, scale);
  auto features = [&](const std::vector<Eigen::Index>& rows) {
    const Eigen::MatrixXd num = standardize(take_rows(data.numeric, rows), mean, scale);
    Eigen::MatrixXd f(num.rows(), num.cols() + text.cols());
    f << num, take_rows(text, rows);
    return f;
  };
  const Eigen::MatrixXd f_tr = features(tr), f_te = features(te);
  Eigen::VectorXd y(f_tr.rows());
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = train_labels[static_cast<std::size_t>(i)];
  LabeledFeatures<double> ld{f_tr, y, data.numeric.cols(), text.cols()};

  FoldScores out;
  for (int attempt = 0; attempt < std::max(1, method.max_attempts); ++attempt) {
    auto init = LearnerParams<double>::random(f_tr.cols(), method.l2,
                                              derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    const auto params = train(init, ld).params;
    out.train = predict_proba(params, f_tr);
    out.test = predict_proba(params, f_te);
    out.attempts = attempt + 1;
    out.train_auc = compute_auc(view(out.train), train_labels);
    if (out.train_auc >= method.retrain_auc) break;
  }
  return out;
}

}  // namespace

EvalReport cross_validate(const Dataset& data, const MethodConfig& method, const CvConfig& cv,
                          const MatchContext& ctx, const Eigen::MatrixXd* similarity) {
  for (int y : data.labels)
    if (y != 0 && y != 1) throw Error(ErrorKind::SchemaError, "every record needs a 0/1 label");
  const auto folds = stratified_folds(data.labels, cv.folds, cv.seed);

  const bool text_graph = method.method == Method::LE || method.method == Method::SLE;
  Eigen::MatrixXd computed;
  if (text_graph && !similarity) {
    computed = build_similarity_matrix(data.documents, ctx).values;
    similarity = &computed;
  }
  const bool joint = cv.joint_embed && (method.method == Method::LE || method.method == Method::LSI);
  Eigen::MatrixXd joint_text;
  if (joint) joint_text = joint_text_features(data, method, similarity);

  EvalReport report;
  report.method = method.method;
  report.dims = method.method == Method::Numeric ? 0 : method.dims;

  for (int f = 0; f < cv.folds; ++f) {
    std::vector<Eigen::Index> tr, te;
    for (std::size_t i = 0; i < folds.size(); ++i)
      (folds[i] == f ? te : tr).push_back(static_cast<Eigen::Index>(i));
    const auto train_labels = take(data.labels, tr);
    const auto test_labels = take(data.labels, te);
    if (!has_both(train_labels) || !has_both(test_labels))
      throw Error(ErrorKind::FoldTooSmall, "fold " + std::to_string(f) + " lacks a class");
    const std::uint64_t fold_seed = derive_seed(cv.seed, static_cast<std::uint64_t>(f) + 1000);

    FoldScores scores;
    if (joint) {
      scores = joint_fold(data, joint_text, method, tr, te, train_labels, fold_seed);
    } else {
      const Eigen::MatrixXd num_tr = take_rows(data.numeric, tr);
      const auto docs_tr = take(data.documents, tr);
      Eigen::MatrixXd s_tr, s_cross;
      if (text_graph) {
        s_tr = take_block(*similarity, tr, tr);
        s_cross = take_block(*similarity, te, tr);
      }
      const FittedModel model =
          fit_model({num_tr, train_labels, docs_tr, text_graph ? &s_tr : nullptr}, method, ctx, fold_seed);
      const Prediction pred = predict(model, take_rows(data.numeric, te), take(data.documents, te),
                                      ctx, text_graph ? &s_cross : nullptr);
      scores.train = training_probabilities(model, num_tr, docs_tr);
      scores.test = pred.probabilities;
      scores.train_auc = model.train_auc;
      scores.attempts = model.attempts;
      scores.zero_weight = pred.zero_weight_estimates;
    }

    FoldResult r;
    r.threshold = best_mcc_threshold(view(scores.train), train_labels).threshold;
    const OperatingPoint op = operating_point(confusion_at(view(scores.test), test_labels, r.threshold));
    r.auc = compute_auc(view(scores.test), test_labels);
    r.mcc = op.mcc;
    r.sensitivity = op.sensitivity;
    r.specificity = op.specificity;
    r.lr_plus = op.lr_plus;
    r.lr_minus = op.lr_minus;
    r.train_auc = scores.train_auc;
    r.attempts = scores.attempts;
    r.zero_weight_estimates = scores.zero_weight;
    report.folds.push_back(r);

    for (std::size_t i = 0; i < te.size(); ++i)
      report.predictions.push_back({data.ids[static_cast<std::size_t>(te[i])], f, test_labels[i],
                                    scores.test(static_cast<Eigen::Index>(i))});
  }

  const double k = static_cast<double>(report.folds.size());
  auto mean_of = [&](auto field) {
    double s = 0.0;
    for (const auto& r : report.folds) s += r.*field;
    return s / k;
  };
  report.mean.auc = mean_of(&FoldResult::auc);
  report.mean.mcc = mean_of(&FoldResult::mcc);
  report.mean.sensitivity = mean_of(&FoldResult::sensitivity);
  report.mean.specificity = mean_of(&FoldResult::specificity);
  report.mean.lr_plus = mean_of(&FoldResult::lr_plus);
  report.mean.lr_minus = mean_of(&FoldResult::lr_minus);
  report.mean.threshold = mean_of(&FoldResult::threshold);
  report.mean.train_auc = mean_of(&FoldResult::train_auc);
  for (const auto& r : report.folds) {
    report.mean.attempts += r.attempts;
    report.mean.zero_weight_estimates += r.zero_weight_estimates;
  }
  std::sort(report.predictions.begin(), report.predictions.end(),
            [&](const FoldPrediction& a, const FoldPrediction& b) { return a.id < b.id; });
  return report;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_row(std::ostream& out, const std::string& fold, const EvalReport& rep, const FoldResult& r) {
  out << fold << ',' << method_name(rep.method) << ',' << rep.dims << ',' << num(r.auc) << ','
      << num(r.mcc) << ',' << num(r.sensitivity) << ',' << num(r.specificity) << ','
      << num(r.lr_plus) << ',' << num(r.lr_minus) << ',' << num(r.threshold) << ','
      << num(r.train_auc) << ',' << r.attempts << ',' << r.zero_weight_estimates << '\n';
}

}  // namespace

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "fold,method,dims,auc,mcc,sensitivity,specificity,lr_plus,lr_minus,threshold,train_auc,"
         "attempts,zero_weight_estimates\n";
  for (std::size_t f = 0; f < report.folds.size(); ++f)
    write_row(out, std::to_string(f), report, report.folds[f]);
  write_row(out, "mean", report, report.mean);
}

void write_predictions_csv(std::ostream& out, const EvalReport& report) {
  out << "id,fold,label,score\n";
  for (const auto& p : report.predictions)
    out << csv_escape(p.id) << ',' << p.fold << ',' << p.label << ',' << num(p.score) << '\n';
}

void write_report_text(std::ostream& out, const EvalReport& report) {
  char buf[256];
  out << "method: " << method_name(report.method) << "\n";
  out << "dims: " << report.dims << "\n";
  out << "folds: " << report.folds.size() << "\n\n";
  out << "fold      AUC      MCC     sens     spec      LR+      LR-  trainAUC\n";
  auto line = [&](const std::string& name, const FoldResult& r) {
    std::snprintf(buf, sizeof buf, "%-6s %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f %9.4f\n", name.c_str(),
                  r.auc, r.mcc, r.sensitivity, r.specificity, r.lr_plus, r.lr_minus, r.train_auc);
    out << buf;
  };
  for (std::size_t f = 0; f < report.folds.size(); ++f) line(std::to_string(f), report.folds[f]);
  line("mean", report.mean);
  out << "\nretrain attempts: " << report.mean.attempts
      << "\nzero-weight KNN estimates: " << report.mean.zero_weight_estimates << "\n";
}

}  // namespace sle
