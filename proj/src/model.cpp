#include "sle/model.hpp"

#include <algorithm>
#include <cctype>

#include "sle/error.hpp"
#include "sle/metrics.hpp"
#include "sle/spectral.hpp"

namespace sle {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Numeric: return "numeric";
    case Method::LE: return "le";
    case Method::SLE: return "sle";
    case Method::LSI: return "lsi";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (Method m : {Method::Numeric, Method::LE, Method::SLE, Method::LSI})
    if (lower == method_name(m)) return m;
  throw Error(ErrorKind::InvalidConfig, "unknown method \"" + std::string(name) +
                                            "\" (expected numeric, le, sle or lsi)");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 over the combined value
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void column_standardizer(const Eigen::MatrixXd& x, Eigen::VectorXd& mean, Eigen::VectorXd& scale) {
  mean = x.colwise().mean().transpose();
  scale.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double sd = x.rows() > 0 ? std::sqrt((x.col(j).array() - mean(j)).square().mean()) : 0.0;
    scale(j) = sd > 1e-12 ? sd : 1.0;
  }
}

Eigen::MatrixXd standardize(const Eigen::MatrixXd& x, const Eigen::VectorXd& mean,
                            const Eigen::VectorXd& scale) {
  if (x.cols() != mean.size())
    throw Error(ErrorKind::DimensionMismatch, "feature width differs from the fitted model");
  return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

namespace {

Eigen::VectorXd to_labels(const std::vector<int>& labels) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1)
      throw Error(ErrorKind::SchemaError, "training labels must be 0 or 1");
    y(static_cast<Eigen::Index>(i)) = labels[i];
  }
  return y;
}

Eigen::MatrixXd hstack(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

double auc_or_zero(const Eigen::VectorXd& scores, const std::vector<int>& labels) {
  const bool pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
  if (!pos || !neg) return 0.0;
  return compute_auc({scores.data(), static_cast<std::size_t>(scores.size())}, labels);
}

Eigen::MatrixXd lsi_features(const FittedModel& model, const std::vector<Document>& docs) {
  const Eigen::MatrixXd raw = model.vocabulary.transform(docs) * model.term_basis;
  return standardize(raw, model.lsi_mean, model.lsi_scale);
}

}  // namespace

FittedModel fit_model(const TrainingSet& train, const MethodConfig& config,
                      const MatchContext& ctx, std::uint64_t seed) {
  const auto m = static_cast<Eigen::Index>(train.labels.size());
  if (train.numeric.rows() != m || static_cast<Eigen::Index>(train.documents.size()) != m)
    throw Error(ErrorKind::DimensionMismatch, "training numeric/labels/documents disagree");

  FittedModel model;
  model.method = config.method;
  model.dims = config.method == Method::Numeric ? 0 : config.dims;
  model.knn = config.knn;
  model.seed = seed;
  const Eigen::VectorXd y = to_labels(train.labels);
  column_standardizer(train.numeric, model.numeric_mean, model.numeric_scale);
  const Eigen::MatrixXd numeric = standardize(train.numeric, model.numeric_mean, model.numeric_scale);

  Laplacian<double> lap;
  Eigen::MatrixXd initial_embedding;
  Eigen::MatrixXd features;
  switch (config.method) {
    case Method::Numeric:
      features = numeric;
      break;
    case Method::LE:
    case Method::SLE: {
      model.train_documents = train.documents;
      Eigen::MatrixXd computed;
      if (!train.similarity) computed = build_similarity_matrix(train.documents, ctx).values;
      const Eigen::MatrixXd& s = train.similarity ? *train.similarity : computed;
      if (s.rows() != m) throw Error(ErrorKind::DimensionMismatch, "similarity size mismatch");
      lap = build_laplacian(s);
      initial_embedding = solve_eigenmap(lap, config.dims);
      model.train_embedding = initial_embedding;
      model.embed_scale = std::sqrt(lap.degree.sum());
      features = hstack(numeric, model.embed_scale * initial_embedding);
      break;
    }
    case Method::LSI: {
      TermDocumentMatrix tdm = build_tfidf(train.documents, config.tfidf);
      const LsiModel lsi = lsi_embed(tdm.weights, config.dims);
      tdm.weights.resize(0, 0);
      model.vocabulary = std::move(tdm);
      model.term_basis = lsi.term_basis;
      column_standardizer(lsi.document_embedding, model.lsi_mean, model.lsi_scale);
      features = hstack(numeric, standardize(lsi.document_embedding, model.lsi_mean, model.lsi_scale));
      break;
    }
  }

  const int attempts = std::max(1, config.max_attempts);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const std::uint64_t attempt_seed = derive_seed(seed, static_cast<std::uint64_t>(attempt));
    model.attempts = attempt + 1;
    Eigen::VectorXd train_scores;
    if (config.method == Method::SLE) {
      SleConfig<double> sc = config.sle;
      sc.dims = config.dims;
      sc.l2 = config.l2;
      sc.seed = attempt_seed;
      auto fitted = fit(numeric, lap, y, sc, &initial_embedding);
      model.params = std::move(fitted.params);
      model.train_embedding = std::move(fitted.embedding);
      model.embed_scale = fitted.embed_scale;
      model.lambda = fitted.lambda;
      model.objective_trace = std::move(fitted.objective_trace);
      model.degenerate_lambda = fitted.degenerate_lambda;
      train_scores = predict_proba(model.params, hstack(numeric, model.embed_scale * model.train_embedding));
    } else {
      LabeledFeatures<double> data{features, y, numeric.cols(), features.cols() - numeric.cols()};
      auto init = LearnerParams<double>::random(features.cols(), config.l2, attempt_seed);
      model.params = sle::train(init, data).params;
      train_scores = predict_proba(model.params, features);
    }
    model.train_auc = auc_or_zero(train_scores, train.labels);
    if (model.train_auc >= config.retrain_auc) break;
  }
  return model;
}

Prediction predict(const FittedModel& model, const Eigen::MatrixXd& numeric_raw,
                   const std::vector<Document>& documents, const MatchContext& ctx,
                   const Eigen::MatrixXd* cross) {
  if (numeric_raw.rows() != static_cast<Eigen::Index>(documents.size()))
    throw Error(ErrorKind::DimensionMismatch, "numeric rows and documents disagree");
  const Eigen::MatrixXd numeric = standardize(numeric_raw, model.numeric_mean, model.numeric_scale);
  Prediction out;
  Eigen::MatrixXd features;
  switch (model.method) {
    case Method::Numeric:
      features = numeric;
      break;
    case Method::LE:
    case Method::SLE: {
      Eigen::MatrixXd computed;
      if (!cross) computed = cross_similarity(documents, model.train_documents, ctx);
      const Eigen::MatrixXd& s = cross ? *cross : computed;
      const Eigen::MatrixXd est =
          estimate_embeddings(s, model.train_embedding, model.knn, &out.zero_weight_estimates);
      features = hstack(numeric, model.embed_scale * est);
      break;
    }
    case Method::LSI:
      features = hstack(numeric, lsi_features(model, documents));
      break;
  }
  out.probabilities = predict_proba(model.params, features);
  return out;
}

Eigen::VectorXd training_probabilities(const FittedModel& model, const Eigen::MatrixXd& numeric_raw,
                                       const std::vector<Document>& documents) {
  const Eigen::MatrixXd numeric = standardize(numeric_raw, model.numeric_mean, model.numeric_scale);
  switch (model.method) {
    case Method::Numeric:
      return predict_proba(model.params, numeric);
    case Method::LE:
    case Method::SLE:
      return predict_proba(model.params, hstack(numeric, model.embed_scale * model.train_embedding));
    case Method::LSI:
      return predict_proba(model.params, hstack(numeric, lsi_features(model, documents)));
  }
  return {};
}

}  // namespace sle
