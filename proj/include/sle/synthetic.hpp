#ifndef SLE_SYNTHETIC_HPP
#define SLE_SYNTHETIC_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sle/dataset.hpp"
#include "sle/transform.hpp"

namespace sle {

/// Generator settings, read from the same key = value syntax as the pipeline
/// configuration.
struct SyntheticSpec {
  std::size_t records = 500;
  std::size_t numeric_dims = 30;
  /// Text clusters in use, at most synthetic_cluster_count().
  std::size_t clusters = 40;
  /// Label score = (1 - text_weight) * numeric part + text_weight * cluster part.
  double text_weight = 0.5;
  /// Probability that a label is flipped after thresholding.
  double noise = 0.1;
  /// Fraction of positive labels before noise.
  double prevalence = 0.3;
  /// Upper bound on statements per document; extra statements come from
  /// unrelated clusters and carry no label signal.
  std::size_t max_statements = 3;
  /// Per-token perturbation probability.
  double perturbation = 0.25;

  static SyntheticSpec parse(std::string_view text);
  static SyntheticSpec load(const std::string& path);
  /// Throws InvalidSpec.
  void validate() const;
  std::string echo() const;
};

std::size_t synthetic_cluster_count();
/// Canonical phrasings of cluster `c`.
const std::vector<std::string>& synthetic_phrases(std::size_t c);

/// Records plus the primary text cluster of each one.
struct SyntheticData {
  std::vector<DatasetRecord> records;
  std::vector<int> clusters;
};

/// Deterministic for a given spec and seed.
SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// The dictionary the generator's perturbations are drawn from, in the text
/// formats read by TransformationDictionary::parse.
struct DictionaryFiles {
  std::string synonyms, acronyms, abbreviations;
};
const DictionaryFiles& synthetic_dictionary_files();
TransformationDictionary synthetic_dictionary();

}  // namespace sle

#endif  // SLE_SYNTHETIC_HPP
