#ifndef SLE_SUPERVISED_HPP
#define SLE_SUPERVISED_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sle/error.hpp"
#include "sle/logistic.hpp"
#include "sle/spectral.hpp"

namespace sle {

template <typename Scalar>
struct SleConfig {
  /// Weight of the classifier loss. Unset: chosen so that λ·Loss(Θ⁰) equals
  /// `lambda_ratio`·Φ(Xe⁰) at initialization.
  std::optional<Scalar> lambda;
  Scalar lambda_ratio = Scalar(0.1);
  Eigen::Index dims = 20;
  int max_outer_iters = 50;
  int inner_theta_steps = 25;
  int inner_embedding_steps = 25;
  Scalar embedding_step = Scalar(0.5);
  Scalar backtrack = Scalar(0.5);
  int max_halvings = 30;
  Scalar tolerance = Scalar(1e-6);
  Scalar l2 = Scalar(1e-3);
  std::uint64_t seed = 0;
};

template <typename Scalar>
struct SleModel {
  LearnerParams<Scalar> params;
  MatrixX<Scalar> embedding;  // training rows, D-orthonormal
  /// Embedding columns enter the classifier multiplied by this constant,
  /// sqrt(tr D), which gives them unit D-weighted mean square.
  Scalar embed_scale = Scalar(1);
  Scalar lambda{};
  std::vector<Scalar> objective_trace;
  bool degenerate_lambda = false;
  SleConfig<Scalar> config;
};

/// [numeric ∥ scale·Xe] with the embedding slice recorded.
template <typename Scalar>
LabeledFeatures<Scalar> assemble_features(const MatrixX<Scalar>& numeric,
                                          const MatrixX<Scalar>& embedding, Scalar scale,
                                          const VectorX<Scalar>& labels) {
  if (numeric.rows() != embedding.rows() || labels.size() != numeric.rows())
    throw Error(ErrorKind::DimensionMismatch, "numeric, embedding and label rows disagree");
  LabeledFeatures<Scalar> data;
  data.x.resize(numeric.rows(), numeric.cols() + embedding.cols());
  data.x << numeric, scale * embedding;
  data.y = labels;
  data.embed_offset = numeric.cols();
  data.embed_cols = embedding.cols();
  return data;
}

/// Φ(Xe) + λ·Loss. `data` must already carry `embedding` in its slice.
template <typename Scalar>
Scalar joint_objective(const MatrixX<Scalar>& embedding, const LearnerParams<Scalar>& params,
                       const Laplacian<Scalar>& lap, const LabeledFeatures<Scalar>& data,
                       Scalar lambda) {
  const Scalar value = objective_phi(embedding, lap) + lambda * loss(params, data);
  if (!std::isfinite(static_cast<double>(value)))
    throw Error(ErrorKind::NonFiniteValue, "joint objective is not finite");
  return value;
}

namespace detail {

template <typename Scalar>
void set_embedding(LabeledFeatures<Scalar>& data, const MatrixX<Scalar>& embedding, Scalar scale) {
  data.x.middleCols(data.embed_offset, data.embed_cols) = scale * embedding;
}

/// True when some column's D-norm, after removing the constant direction,
/// has collapsed, i.e. λ drove the embedding toward the trivial solution.
template <typename Scalar>
bool collapsed(const MatrixX<Scalar>& embedding, const VectorX<Scalar>& degree) {
  const MatrixX<Scalar> centered = remove_trivial(embedding, degree);
  const VectorX<Scalar> norms =
      (centered.array().square().colwise() * degree.array()).colwise().sum().sqrt();
  return norms.size() > 0 && norms.minCoeff() < Scalar(1e-6);
}

}  // namespace detail

/// Alternating minimization of Φ(Xe) + λ·Loss(Θ; [numeric ∥ Xe]).
///
/// Starts from the unsupervised eigenmap (or `initial_embedding`) and a
/// classifier trained to convergence on it. Each outer iteration runs a
/// Θ-step (gradient descent on the loss, Xe fixed) and then an Xe-step
/// (projected gradient descent on the joint objective keeping XeᵀDXe = I).
/// Both inner loops only accept non-increasing steps, so the recorded
/// objective trace never increases. Numeric features are never modified.
template <typename Scalar>
SleModel<Scalar> fit(const MatrixX<Scalar>& numeric, const Laplacian<Scalar>& lap,
                     const VectorX<Scalar>& labels, const SleConfig<Scalar>& config,
                     const MatrixX<Scalar>* initial_embedding = nullptr) {
  const Eigen::Index m = lap.size();
  if (numeric.rows() != m || labels.size() != m)
    throw Error(ErrorKind::DimensionMismatch, "numeric features / labels do not match the Laplacian");
  for (Eigen::Index i = 0; i < m; ++i)
    if (labels(i) != Scalar(0) && labels(i) != Scalar(1))
      throw Error(ErrorKind::SchemaError, "labels must be 0 or 1");

  SleModel<Scalar> model;
  model.config = config;
  model.embedding = initial_embedding ? *initial_embedding : solve_eigenmap(lap, config.dims);
  model.embed_scale = std::sqrt(lap.degree.sum());

  LabeledFeatures<Scalar> data =
      assemble_features(numeric, model.embedding, model.embed_scale, labels);
  auto init = LearnerParams<Scalar>::random(data.x.cols(), config.l2, config.seed);
  model.params = train(init, data).params;

  const Scalar phi0 = objective_phi(model.embedding, lap);
  const Scalar loss0 = loss(model.params, data);
  model.lambda = config.lambda ? *config.lambda
                               : (loss0 > Scalar(0) ? config.lambda_ratio * phi0 / loss0 : Scalar(0));
  if (model.lambda < Scalar(0)) throw Error(ErrorKind::InvalidConfig, "lambda must be >= 0");
  const Scalar lambda = model.lambda;

  Scalar objective = phi0 + lambda * loss0;
  model.objective_trace.push_back(objective);

  TrainOptions<Scalar> theta_opts;
  theta_opts.max_iters = config.inner_theta_steps;
  theta_opts.gradient_tolerance = Scalar(0);

  const LaplacianProduct<Scalar> apply_l(lap);
  for (int outer = 0; outer < config.max_outer_iters; ++outer) {
    const Scalar start = objective;

    // Θ-step: Xe fixed, Φ unchanged, so descending the loss descends the joint objective.
    if (lambda > Scalar(0)) {
      auto step = train(model.params, data, theta_opts);
      if (step.loss <= loss(model.params, data)) model.params = std::move(step.params);
    }
    MatrixX<Scalar> lx = apply_l(model.embedding);
    objective = (model.embedding.cwiseProduct(lx)).sum() + lambda * loss(model.params, data);

    // Xe-step. The trial step grows after each success and shrinks on failure.
    Scalar eta = config.embedding_step;
    for (int s = 0; s < config.inner_embedding_steps; ++s) {
      MatrixX<Scalar> grad = Scalar(2) * lx;
      if (lambda > Scalar(0))
        grad += (lambda * model.embed_scale) * grad_embedding(model.params, data);
      const MatrixX<Scalar> dir = detail::tangent_direction(model.embedding, grad, lap.degree);

      bool accepted = false;
      for (int h = 0; h <= config.max_halvings; ++h, eta *= config.backtrack) {
        MatrixX<Scalar> trial =
            d_orthonormalize(remove_trivial(model.embedding - eta * dir, lap.degree), lap.degree);
        MatrixX<Scalar> trial_lx = apply_l(trial);
        LabeledFeatures<Scalar> trial_data = data;
        detail::set_embedding(trial_data, trial, model.embed_scale);
        const Scalar value = trial.cwiseProduct(trial_lx).sum() + lambda * loss(model.params, trial_data);
        if (!std::isfinite(static_cast<double>(value)))
          throw Error(ErrorKind::NonFiniteValue, "joint objective is not finite");
        if (value <= objective) {
          model.embedding = std::move(trial);
          lx = std::move(trial_lx);
          data = std::move(trial_data);
          objective = value;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      eta = std::min(config.embedding_step, eta / config.backtrack);
    }

    model.objective_trace.push_back(objective);
    if (start - objective <= config.tolerance * std::abs(start)) break;
  }

  model.degenerate_lambda = detail::collapsed(model.embedding, lap.degree);
  return model;
}

}  // namespace sle

#endif  // SLE_SUPERVISED_HPP
