#include "sle/transform.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

#include "sle/error.hpp"

namespace sle {

std::string_view kind_name(TransformationKind kind) {
  switch (kind) {
    case TransformationKind::Equal: return "Equal";
    case TransformationKind::Synonym: return "Synonym";
    case TransformationKind::Misspelling: return "Misspelling";
    case TransformationKind::Abbreviation: return "Abbreviation";
    case TransformationKind::Prefix: return "Prefix";
    case TransformationKind::Acronym: return "Acronym";
    case TransformationKind::Concatenation: return "Concatenation";
    case TransformationKind::Suffix: return "Suffix";
    case TransformationKind::Missing: return "Missing";
  }
  return "?";
}

int TransformationVector::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

std::string to_string(const TransformationVector& c) {
  std::string out = "{";
  bool first = true;
  for (auto kind : kAllTransformationKinds) {
    if (c[kind] == 0) continue;
    if (!first) out += ", ";
    out += std::string(kind_name(kind)) + ":" + std::to_string(c[kind]);
    first = false;
  }
  return out + "}";
}

TransformWeights::TransformWeights() {
  w_.fill(1.0);
  w_[static_cast<std::size_t>(TransformationKind::Missing)] = 0.0;
}

void TransformWeights::set(TransformationKind k, double value) {
  if (!(value >= 0.0 && value <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "transform weight for " + std::string(kind_name(k)) +
                                              " must lie in [0,1]");
  if (k == TransformationKind::Equal && value != 1.0)
    throw Error(ErrorKind::InvalidConfig, "the Equal weight is fixed at 1");
  w_[static_cast<std::size_t>(k)] = value;
}

double TransformWeights::max() const { return *std::max_element(w_.begin(), w_.end()); }

double TransformWeights::score(const TransformationVector& c) const {
  double num = 0.0;
  for (std::size_t u = 0; u < kTransformationKinds; ++u) num += w_[u] * c.counts[u];
  return num / static_cast<double>(c.total());
}

// --- dictionary -------------------------------------------------------------

namespace {

std::string trim_lower(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::istringstream ss{std::string(s)};
  std::vector<std::string> out;
  std::string w;
  while (ss >> w) out.push_back(trim_lower(w));
  return out;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    auto t = trim_lower(line);
    if (t.empty() || t.front() == '#') continue;
    fn(t, line_no);
  }
}

std::pair<std::string, std::string> split_assignment(const std::string& line, std::size_t line_no,
                                                     std::string_view file) {
  auto eq = line.find('=');
  if (eq == std::string::npos)
    throw Error(ErrorKind::ParseError, std::string(file) + " line " + std::to_string(line_no) +
                                           ": expected \"short = long\"");
  auto lhs = trim_lower(std::string_view(line).substr(0, eq));
  auto rhs = trim_lower(std::string_view(line).substr(eq + 1));
  if (lhs.empty() || rhs.empty())
    throw Error(ErrorKind::ParseError,
                std::string(file) + " line " + std::to_string(line_no) + ": empty side");
  return {lhs, rhs};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void TransformationDictionary::add_synonym_group(const std::vector<std::string>& tokens) {
  const auto group = synonym_group_count++;
  for (const auto& t : tokens) synonym_groups[t].insert(group);
}

void TransformationDictionary::add_acronym(const std::string& short_form,
                                           const std::vector<std::string>& expansion) {
  if (!expansion.empty()) acronyms[short_form].insert(expansion);
}

void TransformationDictionary::add_abbreviation(const std::string& short_form,
                                                const std::string& long_form) {
  abbreviations[short_form].insert(long_form);
}

bool TransformationDictionary::synonyms(std::string_view a, std::string_view b) const {
  auto ia = synonym_groups.find(a);
  if (ia == synonym_groups.end()) return false;
  auto ib = synonym_groups.find(b);
  if (ib == synonym_groups.end()) return false;
  for (auto g : ia->second)
    if (ib->second.contains(g)) return true;
  return false;
}

bool TransformationDictionary::abbreviates(std::string_view short_form,
                                           std::string_view long_form) const {
  auto it = abbreviations.find(short_form);
  return it != abbreviations.end() && it->second.contains(std::string(long_form));
}

TransformationDictionary TransformationDictionary::parse(std::string_view synonyms,
                                                         std::string_view acronyms,
                                                         std::string_view abbreviations) {
  TransformationDictionary dict;
  for_each_line(synonyms, [&](const std::string& line, std::size_t) {
    std::vector<std::string> group;
    std::string_view rest = line;
    while (!rest.empty()) {
      auto comma = rest.find(',');
      auto tok = trim_lower(rest.substr(0, comma));
      if (!tok.empty()) group.push_back(tok);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    if (group.size() >= 2) dict.add_synonym_group(group);
  });
  for_each_line(acronyms, [&](const std::string& line, std::size_t n) {
    auto [lhs, rhs] = split_assignment(line, n, "acronyms");
    dict.add_acronym(lhs, split_ws(rhs));
  });
  for_each_line(abbreviations, [&](const std::string& line, std::size_t n) {
    auto [lhs, rhs] = split_assignment(line, n, "abbreviations");
    dict.add_abbreviation(lhs, rhs);
  });
  return dict;
}

TransformationDictionary TransformationDictionary::load(const std::string& dir) {
  if (!std::filesystem::is_directory(dir))
    throw Error(ErrorKind::IoError, "dictionary directory " + dir + " not found");
  return parse(slurp(dir + "/synonyms.txt"), slurp(dir + "/acronyms.txt"),
               slurp(dir + "/abbreviations.txt"));
}

std::size_t damerau_levenshtein(std::string_view a, std::string_view b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1])
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
    }
  }
  return d[n][m];
}

// --- candidate generation ---------------------------------------------------

namespace {

constexpr std::uint32_t bit(std::size_t i) { return std::uint32_t{1} << i; }

std::uint32_t run_mask(std::size_t start, std::size_t len) {
  return ((len >= 32 ? ~std::uint32_t{0} : (bit(len) - 1))) << start;
}

bool within_distance(std::string_view a, std::string_view b, std::size_t max_distance) {
  const auto diff = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
  if (diff > max_distance) return false;
  return damerau_levenshtein(a, b) <= max_distance;
}

/// Hyperedges where a single token on side `one` maps to a run of tokens on
/// side `many`. `flip` reports whether `one` is statement b.
void add_group_candidates(const Statement& one, const Statement& many, bool flip,
                          const TransformationDictionary& dict, std::vector<Candidate>& out) {
  auto push = [&](TransformationKind kind, std::size_t single, std::uint32_t run) {
    if (flip)
      out.push_back({kind, run, bit(single)});
    else
      out.push_back({kind, bit(single), run});
  };
  const auto& toks = many.tokens;
  for (std::size_t t = 0; t < one.tokens.size(); ++t) {
    const auto& token = one.tokens[t];

    // initials of k >= 2 consecutive tokens
    const std::size_t k = token.size();
    if (k >= 2 && k <= toks.size()) {
      for (std::size_t s = 0; s + k <= toks.size(); ++s) {
        bool match = true;
        for (std::size_t q = 0; q < k && match; ++q) match = toks[s + q].front() == token[q];
        if (match) push(TransformationKind::Acronym, t, run_mask(s, k));
      }
    }
    // curated acronym expansions
    if (auto it = dict.acronyms.find(token); it != dict.acronyms.end()) {
      for (const auto& expansion : it->second) {
        const std::size_t len = expansion.size();
        for (std::size_t s = 0; s + len <= toks.size(); ++s) {
          if (std::equal(expansion.begin(), expansion.end(), toks.begin() + s))
            push(TransformationKind::Acronym, t, run_mask(s, len));
        }
      }
    }
    // concatenation of >= 2 adjacent tokens
    for (std::size_t s = 0; s < toks.size(); ++s) {
      std::string joined = toks[s];
      for (std::size_t e = s + 1; e < toks.size() && joined.size() < token.size(); ++e) {
        joined += toks[e];
        if (joined == token) push(TransformationKind::Concatenation, t, run_mask(s, e - s + 1));
      }
    }
  }
}

}  // namespace

std::vector<Candidate> candidate_transformations(const Statement& a, const Statement& b,
                                                 const TransformationDictionary& dict) {
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < a.tokens.size(); ++i) {
    for (std::size_t k = 0; k < b.tokens.size(); ++k) {
      const std::string_view x = a.tokens[i], y = b.tokens[k];
      auto push = [&](TransformationKind kind) { out.push_back({kind, bit(i), bit(k)}); };
      if (x == y) {
        push(TransformationKind::Equal);
        continue;
      }
      if (dict.synonyms(x, y)) push(TransformationKind::Synonym);
      if (x.size() >= dict.misspelling_min_length && y.size() >= dict.misspelling_min_length &&
          within_distance(x, y, dict.misspelling_max_distance))
        push(TransformationKind::Misspelling);
      if (dict.abbreviates(x, y) || dict.abbreviates(y, x)) push(TransformationKind::Abbreviation);
      const auto& shorter = x.size() < y.size() ? x : y;
      const auto& longer = x.size() < y.size() ? y : x;
      if (shorter.size() >= dict.affix_min_length && shorter.size() < longer.size()) {
        if (longer.starts_with(shorter)) push(TransformationKind::Prefix);
        if (longer.ends_with(shorter)) push(TransformationKind::Suffix);
      }
    }
  }
  add_group_candidates(a, b, false, dict, out);
  add_group_candidates(b, a, true, dict, out);

  auto key = [](const Candidate& c) { return std::tuple(c.kind, c.a_tokens, c.b_tokens); };
  std::sort(out.begin(), out.end(), [&](const Candidate& l, const Candidate& r) { return key(l) < key(r); });
  out.erase(std::unique(out.begin(), out.end(),
                        [&](const Candidate& l, const Candidate& r) { return key(l) == key(r); }),
            out.end());
  return out;
}

// --- search -------------------------------------------------------------------

namespace {

void check_statements(const Statement& a, const Statement& b, std::size_t max_tokens) {
  if (a.tokens.empty() || b.tokens.empty())
    throw Error(ErrorKind::EmptyDocument, "statements must contain at least one token");
  const std::size_t cap = std::min<std::size_t>(max_tokens, 31);
  if (a.tokens.size() > cap || b.tokens.size() > cap)
    throw Error(ErrorKind::TokenCapExceeded,
                "statement has " + std::to_string(std::max(a.tokens.size(), b.tokens.size())) +
                    " tokens, cap is " + std::to_string(cap));
}

/// Depth-first walk over the tokens of statement a. Every a token is either
/// Missing or the lowest a token of one candidate; b tokens left over at the
/// leaf become Missing.
class GraphWalker {
 public:
  GraphWalker(const Statement& a, const Statement& b, const TransformationDictionary& dict,
              const TransformWeights* weights)
      : na_(a.tokens.size()), nb_(b.tokens.size()), weights_(weights) {
    candidates_ = candidate_transformations(a, b, dict);
    by_first_a_.resize(na_);
    for (std::size_t c = 0; c < candidates_.size(); ++c)
      by_first_a_[std::countr_zero(candidates_[c].a_tokens)].push_back(c);
    if (weights_) {
      // higher-weight options first so good incumbents appear early
      for (auto& list : by_first_a_)
        std::stable_sort(list.begin(), list.end(), [&](std::size_t l, std::size_t r) {
          return (*weights_)[candidates_[l].kind] > (*weights_)[candidates_[r].kind];
        });
      top_weight_ = weights_->max();
      missing_weight_ = (*weights_)[TransformationKind::Missing];
    }
  }

  std::set<TransformationVector> enumerate() {
    all_.clear();
    bounded_ = false;
    walk(0, 0, 0);
    return std::move(all_);
  }

  StatementMatch best() {
    bounded_ = true;
    best_ = StatementMatch{-1.0, {}};
    walk(0, 0, 0);
    return best_;
  }

 private:
  void leaf(std::uint32_t used_b) {
    TransformationVector c = current_;
    c[TransformationKind::Missing] += static_cast<int>(nb_ - std::popcount(used_b));
    if (!bounded_) {
      all_.insert(c);
      return;
    }
    const double score = weights_->score(c);
    if (score > best_.score || (score == best_.score && prefer(c, best_.witness)))
      best_ = {score, c};
  }

  static bool prefer(const TransformationVector& c, const TransformationVector& incumbent) {
    const int mc = c[TransformationKind::Missing];
    const int mi = incumbent[TransformationKind::Missing];
    if (mc != mi) return mc < mi;
    return c.counts > incumbent.counts;
  }

  // Optimistic value of any completion: tokens with no usable candidate must go
  // Missing; every other remaining token may at best form its own
  // top-weight transformation.
  double bound(std::size_t i, std::uint32_t used_a, std::uint32_t used_b) const {
    const std::uint32_t all_a = static_cast<std::uint32_t>((std::uint64_t{1} << na_) - 1);
    const std::uint32_t all_b = static_cast<std::uint32_t>((std::uint64_t{1} << nb_) - 1);
    const std::uint32_t free_a = all_a & ~used_a, free_b = all_b & ~used_b;
    std::uint32_t reach_a = 0, reach_b = 0;
    for (std::size_t t = i; t < na_; ++t) {
      if (!(free_a & bit(t))) continue;
      for (auto c : by_first_a_[t]) {
        const auto& cand = candidates_[c];
        if ((cand.a_tokens & ~free_a) == 0 && (cand.b_tokens & ~free_b) == 0) {
          reach_a |= cand.a_tokens;
          reach_b |= cand.b_tokens;
        }
      }
    }
    const int forced = std::popcount(free_a & ~reach_a) + std::popcount(free_b & ~reach_b);
    const int open = std::popcount(reach_a) + std::popcount(reach_b);
    const double num = sum_weight_ + forced * missing_weight_;
    const int den = count_ + forced;
    double best = den > 0 ? num / den : 0.0;
    if (open > 0) best = std::max(best, (num + open * top_weight_) / (den + open));
    return best;
  }

  void walk(std::size_t i, std::uint32_t used_a, std::uint32_t used_b) {
    while (i < na_ && (used_a & bit(i))) ++i;
    if (i == na_) {
      leaf(used_b);
      return;
    }
    if (bounded_ && best_.score >= 0.0 && bound(i, used_a, used_b) < best_.score - 1e-12) return;

    for (auto c : by_first_a_[i]) {
      const auto& cand = candidates_[c];
      if ((cand.a_tokens & used_a) || (cand.b_tokens & used_b)) continue;
      apply(cand.kind, +1);
      walk(i + 1, used_a | cand.a_tokens, used_b | cand.b_tokens);
      apply(cand.kind, -1);
    }
    apply(TransformationKind::Missing, +1);
    walk(i + 1, used_a | bit(i), used_b);
    apply(TransformationKind::Missing, -1);
  }

  void apply(TransformationKind kind, int delta) {
    current_[kind] += delta;
    count_ += delta;
    if (weights_) sum_weight_ += delta * (*weights_)[kind];
  }

  std::size_t na_, nb_;
  const TransformWeights* weights_;
  std::vector<Candidate> candidates_;
  std::vector<std::vector<std::size_t>> by_first_a_;
  double top_weight_ = 1.0, missing_weight_ = 0.0;

  bool bounded_ = false;
  TransformationVector current_{};
  int count_ = 0;
  double sum_weight_ = 0.0;
  std::set<TransformationVector> all_;
  StatementMatch best_;
};

}  // namespace

std::set<TransformationVector> enumerate_transformation_vectors(
    const Statement& a, const Statement& b, const TransformationDictionary& dict,
    std::size_t max_tokens) {
  check_statements(a, b, max_tokens);
  return GraphWalker(a, b, dict, nullptr).enumerate();
}

StatementMatch best_statement_match(const Statement& a, const Statement& b,
                                    const TransformWeights& weights,
                                    const TransformationDictionary& dict, std::size_t max_tokens) {
  check_statements(a, b, max_tokens);
  return GraphWalker(a, b, dict, &weights).best();
}

double statement_similarity(const Statement& a, const Statement& b,
                            const TransformWeights& weights, const TransformationDictionary& dict,
                            std::size_t max_tokens) {
  return best_statement_match(a, b, weights, dict, max_tokens).score;
}

}  // namespace sle
