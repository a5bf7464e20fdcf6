#ifndef SLE_TEXT_HPP
#define SLE_TEXT_HPP

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sle {

using Token = std::string;

/// A delimiter-separated fragment of a document: one or more tokens.
struct Statement {
  std::vector<Token> tokens;

  bool operator==(const Statement&) const = default;
  auto operator<=>(const Statement&) const = default;
};

/// A short free-text entry split into statements. A document with no
/// statements is the sentinel produced for text that normalizes to nothing;
/// it has similarity 0 to every other document.
struct Document {
  std::string id;
  std::vector<Statement> statements;
  std::string raw;

  bool is_sentinel() const noexcept { return statements.empty(); }
};

struct NormalizationConfig {
  std::string delimiters = ",./;";
  std::set<std::string, std::less<>> stop_words = default_stop_words();
  std::size_t max_statements = 6;
  std::size_t max_tokens = 12;

  /// Common English stop words. Negations ("no", "not", "nor", "without")
  /// are kept out of the list since they carry clinical meaning.
  static std::set<std::string, std::less<>> default_stop_words();
};

/// Lowercases, drops non-delimiter punctuation, collapses whitespace, removes
/// stop words and splits on delimiters. Statements past `max_statements` and
/// tokens past `max_tokens` are truncated. Throws EmptyDocument when nothing
/// survives.
Document normalize(std::string_view raw, const NormalizationConfig& config,
                   std::string id = {});

/// Same as normalize, but returns the sentinel document instead of throwing.
Document normalize_or_sentinel(std::string_view raw, const NormalizationConfig& config,
                               std::string id = {});

/// Reads a stop-word list (one word per line, '#' comments).
std::set<std::string, std::less<>> load_stop_words(const std::string& path);

}  // namespace sle

#endif  // SLE_TEXT_HPP
