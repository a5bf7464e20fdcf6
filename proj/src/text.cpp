#include "sle/text.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "sle/error.hpp"

namespace sle {

std::set<std::string, std::less<>> NormalizationConfig::default_stop_words() {
  return {"a",     "about", "an",    "and",   "are",  "as",    "at",    "be",   "been",
          "but",   "by",    "for",   "from",  "had",  "has",   "have",  "he",   "her",
          "his",   "i",     "in",    "into",  "is",   "it",    "its",   "me",   "my",
          "of",    "on",    "or",    "our",   "she",  "so",    "that",  "the",  "their",
          "them",  "then",  "there", "these", "they", "this",  "those", "to",   "was",
          "we",    "were",  "what",  "when",  "which", "while", "who",  "will", "with",
          "would", "you",   "your"};
}

namespace {

bool is_delimiter(char c, std::string_view delimiters) {
  return delimiters.find(c) != std::string_view::npos;
}

Document split(std::string_view raw, const NormalizationConfig& config, std::string id) {
  Document doc;
  doc.id = std::move(id);
  doc.raw = std::string(raw);

  Statement current;
  std::string token;
  auto flush_token = [&] {
    if (!token.empty() && !config.stop_words.contains(token) &&
        current.tokens.size() < config.max_tokens)
      current.tokens.push_back(token);
    token.clear();
  };
  auto flush_statement = [&] {
    flush_token();
    if (!current.tokens.empty() && doc.statements.size() < config.max_statements)
      doc.statements.push_back(std::move(current));
    current = Statement{};
  };

  for (char raw_c : raw) {
    const auto c = static_cast<unsigned char>(raw_c);
    if (is_delimiter(raw_c, config.delimiters)) {
      flush_statement();
    } else if (std::isspace(c)) {
      flush_token();
    } else if (std::isalnum(c) || c >= 0x80) {
      token.push_back(static_cast<char>(std::tolower(c)));
    }
    // other punctuation is dropped without splitting the token
  }
  flush_statement();
  return doc;
}

}  // namespace

Document normalize(std::string_view raw, const NormalizationConfig& config, std::string id) {
  Document doc = split(raw, config, std::move(id));
  if (doc.statements.empty())
    throw Error(ErrorKind::EmptyDocument, "no statement survives normalization of \"" +
                                              std::string(raw) + "\"");
  return doc;
}

Document normalize_or_sentinel(std::string_view raw, const NormalizationConfig& config,
                               std::string id) {
  return split(raw, config, std::move(id));
}

std::set<std::string, std::less<>> load_stop_words(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open stop-word file " + path);
  std::set<std::string, std::less<>> words;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ss(line);
    std::string w;
    while (ss >> w) {
      for (auto& ch : w) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      words.insert(w);
    }
  }
  return words;
}

}  // namespace sle
