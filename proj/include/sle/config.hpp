#ifndef SLE_CONFIG_HPP
#define SLE_CONFIG_HPP

#include <map>
#include <string>
#include <string_view>

#include "sle/cross_validation.hpp"
#include "sle/model.hpp"
#include "sle/similarity.hpp"
#include "sle/text.hpp"

namespace sle {

/// "key = value" lines, '#' comments. Throws InvalidConfig on malformed or
/// duplicate keys. `lines`, when given, receives the line of each key.
std::map<std::string, std::string> parse_key_values(std::string_view text,
                                                    std::map<std::string, std::size_t>* lines = nullptr);

/// Everything a pipeline run depends on. Keys use dotted sections, e.g.
/// `embedding.dims = 20` or `weights.missing = 0`; unknown keys are rejected.
struct PipelineConfig {
  NormalizationConfig normalization;
  std::string stopwords_file;
  std::string dict_dir;
  std::size_t misspelling_max_distance = 1;
  std::size_t misspelling_min_length = 4;
  std::size_t affix_min_length = 3;
  TransformWeights weights;
  MethodConfig method;
  CvConfig cv;

  static PipelineConfig parse(std::string_view text);
  static PipelineConfig load(const std::string& path);

  /// Applies one key; used by parse and by CLI overrides.
  void set(const std::string& key, const std::string& value);

  /// Every resolved key, sorted, in the same syntax parse accepts.
  std::string echo() const;

  /// Loads the dictionary (and stop-word file) named by the configuration.
  MatchContext match_context() const;
  NormalizationConfig resolved_normalization() const;
};

}  // namespace sle

#endif  // SLE_CONFIG_HPP
