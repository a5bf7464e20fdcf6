#ifndef SLE_TRANSFORM_HPP
#define SLE_TRANSFORM_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sle/text.hpp"

namespace sle {

/// The closed set of token transformations used to relate two statements.
enum class TransformationKind : std::uint8_t {
  Equal,
  Synonym,
  Misspelling,
  Abbreviation,
  Prefix,
  Acronym,
  Concatenation,
  Suffix,
  Missing,
};

inline constexpr std::size_t kTransformationKinds = 9;

inline constexpr std::array<TransformationKind, kTransformationKinds> kAllTransformationKinds = {
    TransformationKind::Equal,        TransformationKind::Synonym,
    TransformationKind::Misspelling,  TransformationKind::Abbreviation,
    TransformationKind::Prefix,       TransformationKind::Acronym,
    TransformationKind::Concatenation, TransformationKind::Suffix,
    TransformationKind::Missing,
};

std::string_view kind_name(TransformationKind kind);

/// Usage counts per transformation kind for one transformation graph.
struct TransformationVector {
  std::array<int, kTransformationKinds> counts{};

  int& operator[](TransformationKind k) { return counts[static_cast<std::size_t>(k)]; }
  int operator[](TransformationKind k) const { return counts[static_cast<std::size_t>(k)]; }
  int total() const;

  auto operator<=>(const TransformationVector&) const = default;
  bool operator==(const TransformationVector&) const = default;
};

std::string to_string(const TransformationVector& c);

/// Per-kind similarity values in [0,1]; Equal is pinned to 1.
class TransformWeights {
 public:
  /// Every kind weighs 1 except Missing, which weighs 0.
  TransformWeights();

  double operator[](TransformationKind k) const { return w_[static_cast<std::size_t>(k)]; }
  /// Throws InvalidConfig when `value` is outside [0,1] or `k` is Equal and value != 1.
  void set(TransformationKind k, double value);
  double max() const;

  /// Weighted score of a transformation vector, summed in kind order.
  double score(const TransformationVector& c) const;

 private:
  std::array<double, kTransformationKinds> w_;
};

/// Curated term lists backing the Synonym, Acronym, Abbreviation and
/// Misspelling transformations.
struct TransformationDictionary {
  /// Tokens sharing a group index are synonyms.
  std::map<std::string, std::set<std::size_t>, std::less<>> synonym_groups;
  std::size_t synonym_group_count = 0;
  /// short form -> expansions (token sequences)
  std::map<std::string, std::set<std::vector<std::string>>, std::less<>> acronyms;
  /// short form -> long forms
  std::map<std::string, std::set<std::string>, std::less<>> abbreviations;
  std::size_t misspelling_max_distance = 1;
  std::size_t misspelling_min_length = 4;
  std::size_t affix_min_length = 3;

  void add_synonym_group(const std::vector<std::string>& tokens);
  void add_acronym(const std::string& short_form, const std::vector<std::string>& expansion);
  void add_abbreviation(const std::string& short_form, const std::string& long_form);

  bool synonyms(std::string_view a, std::string_view b) const;
  bool abbreviates(std::string_view short_form, std::string_view long_form) const;

  /// Loads synonyms.txt, acronyms.txt and abbreviations.txt from `dir`;
  /// missing files are treated as empty, a missing directory is an IoError.
  static TransformationDictionary load(const std::string& dir);
  static TransformationDictionary parse(std::string_view synonyms, std::string_view acronyms,
                                        std::string_view abbreviations);
};

/// Optimal Damerau-Levenshtein (restricted transposition) distance.
std::size_t damerau_levenshtein(std::string_view a, std::string_view b);

/// One non-Missing transformation between token subsets of statements a and b.
/// Bit i of `a_tokens` / `b_tokens` marks token i as consumed.
struct Candidate {
  TransformationKind kind;
  std::uint32_t a_tokens;
  std::uint32_t b_tokens;
};

/// All valid non-Missing transformations between `a` and `b`, in a
/// deterministic order.
std::vector<Candidate> candidate_transformations(const Statement& a, const Statement& b,
                                                 const TransformationDictionary& dict);

/// Every complete, consistent transformation vector relating `a` to `b`.
/// Exhaustive; intended for diagnostics and small statements.
std::set<TransformationVector> enumerate_transformation_vectors(
    const Statement& a, const Statement& b, const TransformationDictionary& dict,
    std::size_t max_tokens = 12);

struct StatementMatch {
  double score = 0.0;
  /// Among score-equal graphs: fewest Missing, then lexicographically largest counts.
  TransformationVector witness;
};

/// Best-scoring transformation graph by branch and bound.
StatementMatch best_statement_match(const Statement& a, const Statement& b,
                                    const TransformWeights& weights,
                                    const TransformationDictionary& dict,
                                    std::size_t max_tokens = 12);

/// max over complete consistent graphs c of (w . c) / sum(c).
double statement_similarity(const Statement& a, const Statement& b,
                            const TransformWeights& weights,
                            const TransformationDictionary& dict, std::size_t max_tokens = 12);

}  // namespace sle

#endif  // SLE_TRANSFORM_HPP
