#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "sle/error.hpp"
#include "sle/spectral.hpp"

using namespace sle;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd x(r, c);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
  return x;
}

// Removes the component along the constant vector in the D inner product.
Eigen::MatrixXd d_center(const Eigen::MatrixXd& x, const Eigen::VectorXd& d) {
  Eigen::MatrixXd out = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) out.col(j).array() -= x.col(j).dot(d) / d.sum();
  return out;
}

Eigen::VectorXd generalized_eigenvalues(const Laplacian<double>& lap) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(lap.matrix, Eigen::MatrixXd(lap.degree.asDiagonal()));
  return ges.eigenvalues();
}

}  // namespace

TEST_CASE("laplacian of small graphs") {
  Eigen::MatrixXd s(2, 2);
  s << 1, 1, 1, 1;
  const auto lap = build_laplacian(s);
  CHECK(lap.degree.isApprox(Eigen::Vector2d(2, 2)));
  Eigen::MatrixXd want(2, 2);
  want << 1, -1, -1, 1;
  CHECK(lap.matrix.isApprox(want));

  const auto id = build_laplacian(Eigen::MatrixXd::Identity(3, 3));
  CHECK(id.matrix.isZero());
  CHECK(id.degree.isApprox(Eigen::Vector3d::Ones()));
}

TEST_CASE("laplacian row sums and semidefiniteness") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const auto s = oracle::random_similarity(12 + t, rng, 0.3);
    const auto lap = build_laplacian(s);
    CHECK(lap.matrix.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap.matrix);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    for (int k = 0; k < 5; ++k) {
      const Eigen::VectorXd x = random_matrix(s.rows(), 1, rng);
      CHECK(x.dot(lap.matrix * x) >= -1e-10 * x.squaredNorm());
    }
  }
}

TEST_CASE("isolated documents get a floored degree but zero laplacian rows") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(3, 3);
  s(0, 1) = s(1, 0) = 0.5;
  s(2, 2) = 0.0;
  const auto lap = build_laplacian(s);
  CHECK(lap.degree(2) == doctest::Approx(1e-8));
  CHECK(lap.matrix.row(2).isZero());
}

TEST_CASE("non-symmetric and non-square input is rejected") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(3, 3);
  s(0, 1) = 0.5;
  try {
    build_laplacian(s);
    FAIL("expected NonSymmetricInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonSymmetricInput);
  }
  s(1, 0) = 0.5 + 1e-13;
  CHECK_NOTHROW(build_laplacian(s));
  try {
    build_laplacian(Eigen::MatrixXd::Ones(2, 3));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("phi on hand examples") {
  Eigen::MatrixXd s(2, 2);
  s << 1, 1, 1, 1;
  const auto lap = build_laplacian(s);
  CHECK(objective_phi(Eigen::MatrixXd(Eigen::Vector2d(0, 1)), lap) == doctest::Approx(1.0));
  CHECK(objective_phi(Eigen::MatrixXd::Constant(2, 3, 4.5), lap) == doctest::Approx(0.0));
  try {
    objective_phi(Eigen::MatrixXd::Zero(3, 1), lap);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("phi equals half the pairwise weighted squared distance") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto s = oracle::random_similarity(5 + t, rng, 0.2);
    const auto x = random_matrix(s.rows(), 1 + t % 4, rng);
    const double phi = objective_phi(x, build_laplacian(s));
    const double pairwise = oracle::phi_pairwise(s, x);
    CHECK(std::abs(phi - pairwise) <= 1e-8 * std::abs(pairwise));
  }
}

TEST_CASE("phi gradient matches finite differences") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const auto s = oracle::random_similarity(4 + t, rng);
    const auto lap = build_laplacian(s);
    const auto x = random_matrix(s.rows(), 1 + t % 3, rng);
    const auto numeric = oracle::numeric_gradient([&](const Eigen::MatrixXd& y) { return objective_phi(y, lap); }, x);
    CHECK(oracle::relative_error(phi_gradient(x, lap), numeric) < 1e-5);
  }
  const auto lap = build_laplacian(Eigen::MatrixXd::Ones(4, 4));
  CHECK(phi_gradient(Eigen::MatrixXd::Zero(4, 2), lap).isZero());
  const auto flat = build_laplacian(Eigen::MatrixXd::Identity(4, 4));
  CHECK(phi_gradient(random_matrix(4, 2, rng), flat).isZero());
}

TEST_CASE("eigenmap of the two-node graph") {
  Eigen::MatrixXd s(2, 2);
  s << 1, 1, 1, 1;
  s.conservativeResize(3, 3);
  // A third node keeps l = 1 inside [1, m-2]; it is linked only weakly.
  s.row(2) << 0.1, 0.1, 1;
  s.col(2) << 0.1, 0.1, 1;
  const auto lap = build_laplacian(s);
  Eigen::VectorXd values;
  const auto x = solve_eigenmap(lap, 1, &values);
  const Eigen::VectorXd ref = generalized_eigenvalues(lap);
  CHECK(ref(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(values(0) == doctest::Approx(ref(1)));
  CHECK(constraint_residual(x, lap.degree) <= 1e-8);

  // Pure 2-node closed form: eigenvalues {0, 1}, eigenvector ∝ (1, -1)/2.
  Eigen::MatrixXd two(2, 2);
  two << 1, 1, 1, 1;
  const auto ref2 = generalized_eigenvalues(build_laplacian(two));
  CHECK(ref2(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ref2(1) == doctest::Approx(1.0));
}

TEST_CASE("eigenmap matches the generalized eigensolver") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 10; ++t) {
    const Eigen::Index m = 10 + 4 * t;
    const auto lap = build_laplacian(oracle::random_similarity(m, rng, 0.5));
    const Eigen::Index l = 1 + t % 5;
    Eigen::VectorXd values;
    const auto x = solve_eigenmap(lap, l, &values);
    const Eigen::VectorXd ref = generalized_eigenvalues(lap);
    CHECK(x.rows() == m);
    CHECK(x.cols() == l);
    CHECK(constraint_residual(x, lap.degree) <= 1e-8);
    CHECK((values - ref.segment(1, l)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(objective_phi(x, lap) == doctest::Approx(ref.segment(1, l).sum()).epsilon(1e-9));
    // generalized eigenvector residual
    const Eigen::MatrixXd r = lap.matrix * x - lap.degree.asDiagonal() * x * values.asDiagonal();
    CHECK(r.norm() <= 1e-8 * (1 + lap.matrix.norm()));
    // trivial direction removed
    CHECK((lap.degree.transpose() * x).cwiseAbs().maxCoeff() <= 1e-8);
    for (Eigen::Index j = 0; j < l; ++j) {
      Eigen::Index arg = 0;
      x.col(j).cwiseAbs().maxCoeff(&arg);
      CHECK(x(arg, j) > 0);
    }
  }
}

TEST_CASE("eigenmap is no worse than random feasible embeddings") {
  std::mt19937_64 rng(15);
  const auto lap = build_laplacian(oracle::random_similarity(25, rng, 0.4));
  const Eigen::Index l = 3;
  const double best = objective_phi(solve_eigenmap(lap, l), lap);
  for (int t = 0; t < 200; ++t) {
    const auto y = d_orthonormalize(d_center(random_matrix(25, l, rng), lap.degree), lap.degree);
    CHECK(constraint_residual(y, lap.degree) <= 1e-8);
    CHECK(best <= objective_phi(y, lap) + 1e-12);
  }
}

TEST_CASE("eigenmap of a disconnected graph") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(8, 8);
  s.topLeftCorner(4, 4).setConstant(0.7);
  s.bottomRightCorner(4, 4).setConstant(0.4);
  s.diagonal().setOnes();
  const auto lap = build_laplacian(s);
  Eigen::VectorXd values;
  const auto x = solve_eigenmap(lap, 3, &values);
  CHECK(constraint_residual(x, lap.degree) <= 1e-8);
  CHECK(std::abs(values(0)) <= 1e-10);
  CHECK(values(1) > 0.1);
}

TEST_CASE("eigenmap dimension outside range") {
  std::mt19937_64 rng(16);
  const auto lap = build_laplacian(oracle::random_similarity(6, rng));
  for (Eigen::Index l : {Eigen::Index(0), Eigen::Index(5), Eigen::Index(6)}) {
    try {
      solve_eigenmap(lap, l);
      FAIL("expected RankDeficient");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RankDeficient);
    }
  }
  CHECK_NOTHROW(solve_eigenmap(lap, 4));
}

TEST_CASE("eigenmap is deterministic") {
  std::mt19937_64 rng(17);
  const auto lap = build_laplacian(oracle::random_similarity(30, rng, 0.3));
  const auto a = solve_eigenmap(lap, 4);
  const auto b = solve_eigenmap(lap, 4);
  CHECK(a == b);
}

TEST_CASE("descent from the exact solution is stationary") {
  std::mt19937_64 rng(18);
  const auto lap = build_laplacian(oracle::random_similarity(20, rng, 0.3));
  const auto x = solve_eigenmap(lap, 3);
  const double phi = objective_phi(x, lap);
  const auto r = descend_eigenmap(lap, x, 1, 0.1);
  CHECK(std::abs(r.objective - phi) < 1e-10);
}

TEST_CASE("descent with zero step returns the centered orthonormalized start") {
  std::mt19937_64 rng(19);
  const auto lap = build_laplacian(oracle::random_similarity(15, rng));
  const auto init = random_matrix(15, 2, rng);
  const auto r = descend_eigenmap(lap, init, 50, 0.0);
  CHECK(r.accepted_steps == 0);
  CHECK(r.embedding.isApprox(d_orthonormalize(d_center(init, lap.degree), lap.degree)));
  CHECK(constraint_residual(r.embedding, lap.degree) <= 1e-8);
}

TEST_CASE("descent reaches the eigensolver optimum") {
  std::mt19937_64 rng(20);
  for (Eigen::Index m : {Eigen::Index(20), Eigen::Index(35), Eigen::Index(50)}) {
    const auto lap = build_laplacian(oracle::random_similarity(m, rng, 0.6));
    const Eigen::Index l = m == 50 ? 5 : 2;
    const double target = objective_phi(solve_eigenmap(lap, l), lap);
    const auto init = random_matrix(m, l, rng);
    const auto r = descend_eigenmap(lap, init, 20000, 1.0, 1e-15);
    CHECK(constraint_residual(r.embedding, lap.degree) <= 1e-8);
    CHECK(std::abs(r.objective - target) <= 1e-6 * target);
  }
}

TEST_CASE("descent never increases the objective") {
  std::mt19937_64 rng(21);
  const auto lap = build_laplacian(oracle::random_similarity(25, rng, 0.3));
  auto x = d_center(random_matrix(25, 3, rng), lap.degree);
  double prev = objective_phi(d_orthonormalize(x, lap.degree), lap);
  for (int s = 0; s < 30; ++s) {
    const auto r = descend_eigenmap(lap, x, 1, 5.0);
    CHECK(r.objective <= prev);
    prev = r.objective;
    x = r.embedding;
  }
}

TEST_CASE("laplacian product agrees in sparse and dense form") {
  std::mt19937_64 rng(22);
  const auto lap = build_laplacian(oracle::random_similarity(40, rng, 0.95));
  const auto x = random_matrix(40, 4, rng);
  const LaplacianProduct<double> sparse(lap, 1.0);
  const LaplacianProduct<double> dense(lap, 0.0);
  CHECK(oracle::relative_error(sparse(x), lap.matrix * x) < 1e-14);
  CHECK(oracle::relative_error(dense(x), lap.matrix * x) < 1e-14);
}

TEST_CASE("single precision instantiation") {
  std::mt19937_64 rng(23);
  const Eigen::MatrixXf s = oracle::random_similarity(12, rng).cast<float>();
  const auto lap = build_laplacian(s);
  const auto x = solve_eigenmap(lap, 2);
  CHECK(constraint_residual(x, lap.degree) <= 1e-4f);
}
