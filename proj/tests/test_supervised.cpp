#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sle/dataset.hpp"
#include "sle/model.hpp"
#include "sle/similarity.hpp"
#include "sle/supervised.hpp"
#include "sle/synthetic.hpp"

using namespace sle;

namespace {

struct Problem {
  Eigen::MatrixXd numeric;
  Eigen::VectorXd labels;
  Laplacian<double> lap;
};

// Small synthetic corpus: clustered text, numeric features, noisy labels.
Problem synthetic_problem(std::uint64_t seed, std::size_t records = 120) {
  SyntheticSpec spec;
  spec.records = records;
  spec.numeric_dims = 4;
  spec.clusters = 8;
  const auto syn = generate_synthetic(spec, seed);
  const Dataset data = make_dataset(syn.records, NormalizationConfig{});
  MatchContext ctx;
  ctx.dictionary = synthetic_dictionary();
  Problem p;
  Eigen::VectorXd mean, scale;
  column_standardizer(data.numeric, mean, scale);
  p.numeric = standardize(data.numeric, mean, scale);
  p.labels.resize(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) p.labels(static_cast<Eigen::Index>(i)) = data.labels[i];
  p.lap = build_laplacian(build_similarity_matrix(data.documents, ctx).values);
  return p;
}

SleConfig<double> small_config() {
  SleConfig<double> c;
  c.dims = 4;
  c.max_outer_iters = 8;
  c.inner_theta_steps = 10;
  c.inner_embedding_steps = 10;
  c.seed = 7;
  return c;
}

}  // namespace

TEST_CASE("joint objective recomposes") {
  std::mt19937_64 rng(1);
  const auto s = oracle::random_similarity(12, rng, 0.3);
  const auto lap = build_laplacian(s);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd numeric(12, 2), emb(12, 3);
  for (Eigen::Index i = 0; i < numeric.size(); ++i) numeric.data()[i] = g(rng);
  for (Eigen::Index i = 0; i < emb.size(); ++i) emb.data()[i] = g(rng);
  Eigen::VectorXd y(12);
  for (Eigen::Index i = 0; i < 12; ++i) y(i) = i % 3 == 0;
  const auto data = assemble_features(numeric, emb, 1.0, y);
  auto params = LearnerParams<double>::random(5, 0.01, 3);
  params.bias = 0.2;

  const double lambda = 0.37;
  CHECK(joint_objective(emb, params, lap, data, lambda) == objective_phi(emb, lap) + lambda * loss(params, data));
  CHECK(joint_objective(emb, params, lap, data, 0.0) == objective_phi(emb, lap));
  CHECK(joint_objective(emb, params, lap, data, 0.0) == doctest::Approx(oracle::phi_pairwise(s, emb)));

  const Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(12, 3, 0.8);
  CHECK(joint_objective(flat, params, lap, assemble_features(numeric, flat, 1.0, y), 0.0) ==
        doctest::Approx(0.0));
}

TEST_CASE("assembled features keep numeric columns first") {
  Eigen::MatrixXd numeric(2, 2), emb(2, 1);
  numeric << 1, 2, 3, 4;
  emb << 5, 6;
  const auto d = assemble_features(numeric, emb, 2.0, Eigen::VectorXd(Eigen::Vector2d(0, 1)));
  CHECK(d.embed_offset == 2);
  CHECK(d.embed_cols == 1);
  CHECK(d.x(1, 2) == 12.0);
  CHECK(d.x(0, 1) == 2.0);
}

TEST_CASE("objective trace never increases") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto p = synthetic_problem(seed);
    auto cfg = small_config();
    cfg.seed = seed;
    const auto model = fit(p.numeric, p.lap, p.labels, cfg);
    REQUIRE(model.objective_trace.size() >= 2);
    for (std::size_t i = 1; i < model.objective_trace.size(); ++i)
      CHECK(model.objective_trace[i] <= model.objective_trace[i - 1]);
    CHECK(constraint_residual(model.embedding, p.lap.degree) <= 1e-6);
    CHECK(model.lambda > 0.0);
    CHECK_FALSE(model.degenerate_lambda);
  }
}

TEST_CASE("zero lambda leaves the eigenmap in place") {
  const auto p = synthetic_problem(3);
  auto cfg = small_config();
  cfg.lambda = 0.0;
  const auto start = solve_eigenmap(p.lap, cfg.dims);
  const auto model = fit(p.numeric, p.lap, p.labels, cfg);
  CHECK((model.embedding - start).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("fit is deterministic") {
  const auto p = synthetic_problem(4);
  const auto a = fit(p.numeric, p.lap, p.labels, small_config());
  const auto b = fit(p.numeric, p.lap, p.labels, small_config());
  REQUIRE(a.objective_trace.size() == b.objective_trace.size());
  for (std::size_t i = 0; i < a.objective_trace.size(); ++i)
    CHECK(std::abs(a.objective_trace[i] - b.objective_trace[i]) <= 1e-12);
  CHECK(a.embedding == b.embedding);
}

TEST_CASE("the default lambda balances the initial terms") {
  const auto p = synthetic_problem(5);
  auto cfg = small_config();
  cfg.max_outer_iters = 0;
  const auto model = fit(p.numeric, p.lap, p.labels, cfg);
  const double phi0 = objective_phi(model.embedding, p.lap);
  const auto data = assemble_features(p.numeric, model.embedding, model.embed_scale, p.labels);
  CHECK(model.lambda * loss(model.params, data) == doctest::Approx(0.1 * phi0).epsilon(1e-10));
}

TEST_CASE("supervision improves training fit over the unsupervised embedding") {
  double le_total = 0.0, sle_total = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SyntheticSpec spec;
    spec.records = 200;
    spec.numeric_dims = 0;
    spec.text_weight = 1.0;
    spec.clusters = 10;
    const auto syn = generate_synthetic(spec, seed);
    const Dataset data = make_dataset(syn.records, NormalizationConfig{});
    MatchContext ctx;
    ctx.dictionary = synthetic_dictionary();
    const Eigen::MatrixXd s = build_similarity_matrix(data.documents, ctx).values;
    const TrainingSet train{data.numeric, data.labels, data.documents, &s};
    MethodConfig cfg;
    cfg.dims = 5;
    cfg.sle.max_outer_iters = 10;
    cfg.method = Method::LE;
    le_total += fit_model(train, cfg, ctx, seed).train_auc;
    cfg.method = Method::SLE;
    sle_total += fit_model(train, cfg, ctx, seed).train_auc;
  }
  CHECK(sle_total >= le_total);
}

TEST_CASE("mismatched inputs are rejected") {
  const auto p = synthetic_problem(6, 40);
  Eigen::VectorXd bad = p.labels;
  bad(0) = 0.5;
  try {
    fit(p.numeric, p.lap, bad, small_config());
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SchemaError);
  }
  try {
    fit(Eigen::MatrixXd(p.numeric.topRows(10)), p.lap, p.labels, small_config());
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}
