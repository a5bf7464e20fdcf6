#include <doctest.h>

#include <cmath>
#include <random>

#include "sle/error.hpp"
#include "sle/lsi.hpp"
#include "sle/text.hpp"

using namespace sle;

namespace {

Document doc(std::initializer_list<std::initializer_list<const char*>> statements) {
  Document d;
  for (const auto& s : statements) {
    Statement st;
    for (auto t : s) st.tokens.emplace_back(t);
    d.statements.push_back(std::move(st));
  }
  return d;
}

Eigen::MatrixXd gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd x(r, c);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  return x;
}

double reconstruction_error(const Eigen::MatrixXd& a, const LsiModel& m) {
  return (a - m.document_embedding * m.term_basis.transpose()).norm();
}

}  // namespace

TEST_CASE("tf-idf of a three document corpus") {
  // pain: docs 0,1,2; chest: 0,1; murmur: 2 (twice)
  const std::vector<Document> corpus = {doc({{"chest", "pain"}}), doc({{"pain"}, {"chest"}}),
                                        doc({{"murmur", "pain", "murmur"}})};
  const auto tdm = build_tfidf(corpus);
  REQUIRE(tdm.vocabulary == std::vector<std::string>{"chest", "murmur", "pain"});
  const double l3 = std::log(3.0), l32 = std::log(1.5);
  Eigen::MatrixXd want(3, 3);
  want << l32, 0, 0,
          l32, 0, 0,
          0, 2 * l3, 0;
  CHECK((tdm.weights - want).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(tdm.idf(2) == 0.0);
  CHECK(tdm.weights.col(2).isZero(0.0));

  const auto raw = build_tfidf(corpus, false);
  CHECK(raw.weights(2, 1) == 2.0);
  CHECK(raw.weights(1, 2) == 1.0);
  CHECK(raw.idf.isOnes());
}

TEST_CASE("transform ignores unknown tokens") {
  const std::vector<Document> corpus = {doc({{"a", "b"}}), doc({{"b", "c"}})};
  const auto tdm = build_tfidf(corpus);
  const auto w = tdm.transform({doc({{"a", "zzz", "a"}})});
  CHECK(w.cols() == 3);
  CHECK(w(0, 0) == doctest::Approx(2 * std::log(2.0)));
  CHECK(w(0, 1) == 0.0);
  CHECK(w.row(0).tail(1).isZero(0.0));
  CHECK(tdm.transform(corpus) == tdm.weights);
}

TEST_CASE("empty vocabulary") {
  try {
    build_tfidf({Document{}, Document{}});
    FAIL("expected EmptyVocabulary");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyVocabulary);
  }
}

TEST_CASE("rank one reconstruction") {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd a = gaussian(7, 1, rng) * gaussian(1, 9, rng);
  CHECK(reconstruction_error(a, lsi_embed(a, 1)) < 1e-10);
}

TEST_CASE("full rank reconstruction") {
  std::mt19937_64 rng(2);
  for (auto [r, c] : {std::pair<Eigen::Index, Eigen::Index>{6, 10}, {12, 5}, {8, 8}}) {
    const auto a = gaussian(r, c, rng);
    CHECK(reconstruction_error(a, lsi_embed(a, std::min(r, c))) < 1e-8);
  }
}

TEST_CASE("truncated svd beats random factorizations") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto a = gaussian(15 + t, 12, rng);
    const Eigen::Index l = 1 + t % 4;
    const double best = reconstruction_error(a, lsi_embed(a, l));
    for (int k = 0; k < 20; ++k) {
      // least-squares fit of a random rank-l basis: the best that basis can do
      const auto b = gaussian(a.cols(), l, rng);
      const Eigen::MatrixXd coeff = (a * b) * (b.transpose() * b).inverse();
      CHECK(best <= (a - coeff * b.transpose()).norm());
    }
  }
}

TEST_CASE("projection of training rows reproduces the embedding") {
  std::mt19937_64 rng(4);
  const auto a = gaussian(20, 14, rng);
  const auto m = lsi_embed(a, 5);
  CHECK((m.project(a) - m.document_embedding).norm() < 1e-10);
  for (Eigen::Index j = 0; j < 5; ++j) {
    Eigen::Index arg = 0;
    m.document_embedding.col(j).cwiseAbs().maxCoeff(&arg);
    CHECK(m.document_embedding(arg, j) > 0);
  }
  CHECK(std::is_sorted(m.singular_values.data(), m.singular_values.data() + 5, std::greater<>()));
}

TEST_CASE("lsi dimension out of range") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Ones(4, 3);
  for (Eigen::Index l : {Eigen::Index(0), Eigen::Index(4)}) {
    try {
      lsi_embed(a, l);
      FAIL("expected RankDeficient");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RankDeficient);
    }
  }
}
