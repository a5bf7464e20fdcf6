#include <doctest.h>

#include "sle/config.hpp"
#include "sle/error.hpp"

using namespace sle;

namespace {

void expect_invalid(const std::string& text) {
  CAPTURE(text);
  try {
    PipelineConfig::parse(text);
    FAIL("expected InvalidConfig");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidConfig);
  }
}

}  // namespace

TEST_CASE("defaults") {
  const auto c = PipelineConfig::parse("");
  CHECK(c.method.method == Method::SLE);
  CHECK(c.method.dims == 20);
  CHECK(c.method.knn.k == 5);
  CHECK(c.method.knn.weighted);
  CHECK(c.cv.folds == 5);
  CHECK(c.method.retrain_auc == 0.65);
  CHECK(c.method.max_attempts == 5);
  CHECK(c.method.sle.max_outer_iters == 50);
  CHECK(c.method.sle.inner_theta_steps == 25);
  CHECK(c.method.sle.tolerance == 1e-6);
  CHECK_FALSE(c.method.sle.lambda.has_value());
}

TEST_CASE("keys are applied") {
  const auto c = PipelineConfig::parse(
      "# comment\n"
      "method = lsi\n"
      "embedding.dims = 7\n"
      "\n"
      "knn.k = 3\n"
      "knn.weighted = off\n"
      "weights.synonym = 0.25\n"
      "sle.lambda = 0.5\n"
      "cv.seed = 42\n"
      "cv.joint_embed = yes\n"
      "normalize.max_tokens = 9\n");
  CHECK(c.method.method == Method::LSI);
  CHECK(c.method.dims == 7);
  CHECK(c.method.knn.k == 3);
  CHECK_FALSE(c.method.knn.weighted);
  CHECK(c.method.sle.lambda == 0.5);
  CHECK(c.cv.seed == 42);
  CHECK(c.cv.joint_embed);
  CHECK(c.normalization.max_tokens == 9);
}

TEST_CASE("echo parses back to the same configuration") {
  auto c = PipelineConfig::parse("method = le\nlearner.l2 = 0.1\nsle.lambda = 0.3\nweights.missing = 0.01\n");
  const std::string echo = c.echo();
  CHECK(PipelineConfig::parse(echo).echo() == echo);
  CHECK(echo.find("method = le\n") != std::string::npos);
  CHECK(echo.find("sle.lambda = 0.29999999999999999\n") != std::string::npos);

  const std::string auto_lambda = PipelineConfig::parse("").echo();
  CHECK(auto_lambda.find("sle.lambda = auto\n") != std::string::npos);
  CHECK(PipelineConfig::parse(auto_lambda).echo() == auto_lambda);
}

TEST_CASE("invalid configurations") {
  expect_invalid("bogus.key = 1\n");
  expect_invalid("method = svm\n");
  expect_invalid("embedding.dims = zero\n");
  expect_invalid("cv.folds = 1\n");
  expect_invalid("knn.weighted = maybe\n");
  expect_invalid("sle.lambda = -1\n");
  expect_invalid("no equals sign\n");
  expect_invalid("= 3\n");
  expect_invalid("knn.k = 3\nknn.k = 4\n");
  expect_invalid("normalize.max_tokens = 40\n");
  expect_invalid("learner.l2 = nan\n");
}

TEST_CASE("errors carry the line number") {
  try {
    PipelineConfig::parse("method = le\n\nknn.k = x\n");
    FAIL("expected InvalidConfig");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("overrides through set") {
  auto c = PipelineConfig::parse("knn.k = 3\n");
  c.set("knn.k", "9");
  CHECK(c.method.knn.k == 9);
  try {
    c.set("nope", "1");
    FAIL("expected InvalidConfig");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidConfig);
  }
}

TEST_CASE("dictionary files from the data directory") {
  auto c = PipelineConfig::parse(std::string("dict.dir = ") + SLE_DATA_DIR + "/dict\n");
  const auto ctx = c.match_context();
  CHECK(ctx.max_tokens == c.normalization.max_tokens);
  c.set("dict.dir", "/nonexistent");
  CHECK_THROWS_AS(c.match_context(), Error);
}
