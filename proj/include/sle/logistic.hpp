#ifndef SLE_LOGISTIC_HPP
#define SLE_LOGISTIC_HPP

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "sle/error.hpp"
#include "sle/spectral.hpp"

namespace sle {

/// L2-regularized logistic regression parameters. The bias is not penalized.
template <typename Scalar>
struct LearnerParams {
  VectorX<Scalar> weights;
  Scalar bias{};
  Scalar l2{};

  static LearnerParams zeros(Eigen::Index features, Scalar l2) {
    return {VectorX<Scalar>::Zero(features), Scalar(0), l2};
  }

  /// Small Gaussian weights drawn from `seed`.
  static LearnerParams random(Eigen::Index features, Scalar l2, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 0.01);
    LearnerParams p = zeros(features, l2);
    for (Eigen::Index j = 0; j < features; ++j) p.weights(j) = static_cast<Scalar>(normal(rng));
    return p;
  }
};

/// Feature matrix with binary labels. Columns [embed_offset, embed_offset +
/// embed_cols) hold the text embedding.
template <typename Scalar>
struct LabeledFeatures {
  MatrixX<Scalar> x;
  VectorX<Scalar> y;
  Eigen::Index embed_offset = 0;
  Eigen::Index embed_cols = 0;

  Eigen::Index samples() const { return x.rows(); }
};

namespace detail {

template <typename Scalar>
Scalar softplus(Scalar z) {
  return std::max(z, Scalar(0)) + std::log1p(std::exp(-std::abs(z)));
}

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

template <typename Scalar>
void check_shapes(const LearnerParams<Scalar>& params, const LabeledFeatures<Scalar>& data) {
  if (params.weights.size() != data.x.cols() || data.y.size() != data.x.rows())
    throw Error(ErrorKind::DimensionMismatch, "parameter/feature/label sizes disagree");
}

template <typename Scalar>
Scalar finite_or_throw(Scalar v, const char* what) {
  if (!std::isfinite(static_cast<double>(v))) throw Error(ErrorKind::NonFiniteValue, what);
  return v;
}

}  // namespace detail

template <typename Derived, typename Scalar>
VectorX<Scalar> decision_scores(const LearnerParams<Scalar>& params,
                                const Eigen::MatrixBase<Derived>& x) {
  return (x * params.weights).array() + params.bias;
}

/// σ(Xw + b), evaluated without overflow for any finite logit.
template <typename Derived, typename Scalar>
VectorX<Scalar> predict_proba(const LearnerParams<Scalar>& params,
                              const Eigen::MatrixBase<Derived>& x) {
  return decision_scores(params, x).unaryExpr([](Scalar z) { return detail::sigmoid(z); });
}

/// Mean negative log-likelihood plus (l2/2)‖w‖².
template <typename Scalar>
Scalar loss(const LearnerParams<Scalar>& params, const LabeledFeatures<Scalar>& data) {
  detail::check_shapes(params, data);
  const VectorX<Scalar> z = decision_scores(params, data.x);
  Scalar total(0);
  for (Eigen::Index i = 0; i < z.size(); ++i) total += detail::softplus(z(i)) - data.y(i) * z(i);
  const Scalar value = total / static_cast<Scalar>(z.size()) +
                       Scalar(0.5) * params.l2 * params.weights.squaredNorm();
  return detail::finite_or_throw(value, "logistic loss is not finite");
}

/// σ(z) − y per sample.
template <typename Scalar>
VectorX<Scalar> residuals(const LearnerParams<Scalar>& params, const LabeledFeatures<Scalar>& data) {
  return predict_proba(params, data.x) - data.y;
}

template <typename Scalar>
struct ThetaGradient {
  VectorX<Scalar> weights;
  Scalar bias{};

  Scalar squared_norm() const { return weights.squaredNorm() + bias * bias; }
};

template <typename Scalar>
ThetaGradient<Scalar> grad_theta(const LearnerParams<Scalar>& params,
                                 const LabeledFeatures<Scalar>& data) {
  detail::check_shapes(params, data);
  const VectorX<Scalar> r = residuals(params, data);
  const auto m = static_cast<Scalar>(r.size());
  ThetaGradient<Scalar> g{data.x.transpose() * r / m + params.l2 * params.weights, r.sum() / m};
  if (!g.weights.allFinite() || !std::isfinite(static_cast<double>(g.bias)))
    throw Error(ErrorKind::NonFiniteValue, "loss gradient is not finite");
  return g;
}

/// ∂loss/∂X restricted to the embedding columns: (σ(z) − y) w_embedᵀ / m.
template <typename Scalar>
MatrixX<Scalar> grad_embedding(const LearnerParams<Scalar>& params,
                               const LabeledFeatures<Scalar>& data) {
  detail::check_shapes(params, data);
  const VectorX<Scalar> r = residuals(params, data);
  MatrixX<Scalar> g =
      r * params.weights.segment(data.embed_offset, data.embed_cols).transpose() /
      static_cast<Scalar>(r.size());
  if (!g.allFinite()) throw Error(ErrorKind::NonFiniteValue, "embedding gradient is not finite");
  return g;
}

template <typename Scalar>
struct TrainOptions {
  int max_iters = 5000;
  Scalar gradient_tolerance = Scalar(1e-8);
  Scalar armijo = Scalar(1e-4);
  Scalar backtrack = Scalar(0.5);
};

template <typename Scalar>
struct TrainResult {
  LearnerParams<Scalar> params;
  Scalar loss{};
  int iterations = 0;
  bool converged = false;
};

/// Gradient descent on the loss over Θ with an Armijo backtracking line
/// search. The first trial step of each iteration is the Barzilai-Borwein
/// step from the previous one.
template <typename Scalar>
TrainResult<Scalar> train(LearnerParams<Scalar> params, const LabeledFeatures<Scalar>& data,
                          const TrainOptions<Scalar>& opts = {}) {
  TrainResult<Scalar> out;
  Scalar f = loss(params, data);
  ThetaGradient<Scalar> g = grad_theta(params, data);
  Scalar trial = Scalar(1);
  for (int it = 0; it < opts.max_iters; ++it) {
    const Scalar gnorm2 = g.squared_norm();
    if (std::sqrt(gnorm2) < opts.gradient_tolerance) {
      out.converged = true;
      break;
    }
    Scalar t = trial;
    LearnerParams<Scalar> next = params;
    Scalar f_next = f;
    bool moved = false;
    for (int h = 0; h < 60; ++h, t *= opts.backtrack) {
      next.weights = params.weights - t * g.weights;
      next.bias = params.bias - t * g.bias;
      f_next = loss(next, data);
      if (f_next <= f - opts.armijo * t * gnorm2) {
        moved = true;
        break;
      }
    }
    // no representable progress left
    if (!moved || !(f_next < f)) break;
    const ThetaGradient<Scalar> g_next = grad_theta(next, data);
    // Barzilai-Borwein: <s,s>/<s,y>
    const Scalar sy = -t * (g.weights.dot(g_next.weights - g.weights) + g.bias * (g_next.bias - g.bias));
    const Scalar ss = t * t * gnorm2;
    trial = sy > Scalar(0) ? std::clamp(ss / sy, Scalar(1e-8), Scalar(1e8)) : Scalar(1);
    params = std::move(next);
    f = f_next;
    g = g_next;
    out.iterations = it + 1;
  }
  out.converged = out.converged || std::sqrt(g.squared_norm()) < opts.gradient_tolerance;
  out.params = std::move(params);
  out.loss = f;
  return out;
}

}  // namespace sle

#endif  // SLE_LOGISTIC_HPP
