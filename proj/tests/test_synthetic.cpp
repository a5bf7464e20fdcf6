#include <doctest.h>

#include <fstream>
#include <sstream>

#include "sle/dataset.hpp"
#include "sle/error.hpp"
#include "sle/similarity.hpp"
#include "sle/synthetic.hpp"

using namespace sle;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string render(const SyntheticData& d) {
  std::ostringstream out;
  write_dataset_csv(out, d.records);
  return out.str();
}

}  // namespace

TEST_CASE("same seed, same bytes") {
  SyntheticSpec spec;
  spec.records = 80;
  CHECK(render(generate_synthetic(spec, 5)) == render(generate_synthetic(spec, 5)));
  CHECK(render(generate_synthetic(spec, 5)) != render(generate_synthetic(spec, 6)));
}

TEST_CASE("shape and label balance") {
  SyntheticSpec spec;
  spec.records = 400;
  spec.numeric_dims = 7;
  spec.noise = 0.0;
  spec.prevalence = 0.25;
  const auto d = generate_synthetic(spec, 1);
  REQUIRE(d.records.size() == 400);
  REQUIRE(d.clusters.size() == 400);
  int pos = 0;
  for (const auto& r : d.records) {
    CHECK(r.numeric.size() == 7);
    CHECK(r.label.has_value());
    CHECK_FALSE(r.text.empty());
    pos += *r.label;
  }
  CHECK(pos == 100);
}

TEST_CASE("documents are closer within a cluster than across clusters") {
  SyntheticSpec spec;
  spec.records = 150;
  spec.text_weight = 1.0;
  spec.noise = 0.0;
  spec.clusters = 12;
  const auto d = generate_synthetic(spec, 2);
  const Dataset ds = make_dataset(d.records, NormalizationConfig{});
  MatchContext ctx;
  ctx.dictionary = synthetic_dictionary();
  const auto s = build_similarity_matrix(ds.documents, ctx).values;
  double within = 0, across = 0;
  long nw = 0, na = 0;
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = i + 1; j < s.cols(); ++j) {
      if (d.clusters[static_cast<std::size_t>(i)] == d.clusters[static_cast<std::size_t>(j)]) {
        within += s(i, j);
        ++nw;
      } else {
        across += s(i, j);
        ++na;
      }
    }
  CHECK(within / nw > across / na + 0.1);
}

TEST_CASE("spec parsing and validation") {
  const auto spec = SyntheticSpec::parse("records = 12\nnoise = 0\ntext_weight = 1\nnumeric_dims = 0\n");
  CHECK(spec.records == 12);
  CHECK(SyntheticSpec::parse(spec.echo()).echo() == spec.echo());
  for (const char* bad : {"colour = red\n", "noise = 0.7\n", "prevalence = 1\n", "clusters = 99\n",
                          "numeric_dims = 0\n"}) {
    CAPTURE(bad);
    try {
      SyntheticSpec::parse(bad).validate();
      FAIL("expected InvalidSpec");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidSpec);
    }
  }
}

TEST_CASE("checked-in dictionary files match the generator") {
  const auto& files = synthetic_dictionary_files();
  CHECK(slurp(std::string(SLE_DATA_DIR) + "/dict/synonyms.txt") == files.synonyms);
  CHECK(slurp(std::string(SLE_DATA_DIR) + "/dict/acronyms.txt") == files.acronyms);
  CHECK(slurp(std::string(SLE_DATA_DIR) + "/dict/abbreviations.txt") == files.abbreviations);
}

TEST_CASE("text-free labels leave the text uninformative") {
  SyntheticSpec spec;
  spec.records = 300;
  spec.text_weight = 0.0;
  spec.noise = 0.0;
  const auto d = generate_synthetic(spec, 4);
  // positives spread over many clusters
  std::vector<int> pos_by_cluster(synthetic_cluster_count(), 0);
  for (std::size_t i = 0; i < d.records.size(); ++i)
    if (*d.records[i].label) ++pos_by_cluster[static_cast<std::size_t>(d.clusters[i])];
  int used = 0;
  for (int n : pos_by_cluster) used += n > 0;
  CHECK(used >= 20);
}
