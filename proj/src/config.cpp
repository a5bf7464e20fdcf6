#include "sle/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "sle/error.hpp"

namespace sle {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  throw Error(ErrorKind::InvalidConfig, key + " = \"" + value + "\": expected " + what);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    bad_value(key, v, "a finite number");
  return out;
}

long long to_int(const std::string& key, const std::string& v, long long lo) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || out < lo)
    bad_value(key, v, ("an integer >= " + std::to_string(lo)).c_str());
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v, "an unsigned integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "true or false");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(bool v) { return v ? "true" : "false"; }

struct Field {
  std::function<void(PipelineConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> t;
    t["method"] = {[](auto& c, auto&, auto& v) { c.method.method = parse_method(v); },
                   [](auto& c) { return std::string(method_name(c.method.method)); }};
    t["normalize.delimiters"] = {
        [](auto& c, auto& k, auto& v) {
          if (v.empty()) bad_value(k, v, "at least one delimiter");
          c.normalization.delimiters = v;
        },
        [](auto& c) { return c.normalization.delimiters; }};
    t["normalize.stopwords_file"] = {[](auto& c, auto&, auto& v) { c.stopwords_file = v; },
                                     [](auto& c) { return c.stopwords_file; }};
    t["normalize.max_statements"] = {
        [](auto& c, auto& k, auto& v) { c.normalization.max_statements = static_cast<std::size_t>(to_int(k, v, 1)); },
        [](auto& c) { return std::to_string(c.normalization.max_statements); }};
    t["normalize.max_tokens"] = {
        [](auto& c, auto& k, auto& v) {
          const auto n = to_int(k, v, 1);
          if (n > 31) bad_value(k, v, "an integer in [1, 31]");
          c.normalization.max_tokens = static_cast<std::size_t>(n);
        },
        [](auto& c) { return std::to_string(c.normalization.max_tokens); }};
    t["dict.dir"] = {[](auto& c, auto&, auto& v) { c.dict_dir = v; },
                     [](auto& c) { return c.dict_dir; }};
    t["dict.misspelling_max_distance"] = {
        [](auto& c, auto& k, auto& v) { c.misspelling_max_distance = static_cast<std::size_t>(to_int(k, v, 0)); },
        [](auto& c) { return std::to_string(c.misspelling_max_distance); }};
    t["dict.misspelling_min_length"] = {
        [](auto& c, auto& k, auto& v) { c.misspelling_min_length = static_cast<std::size_t>(to_int(k, v, 1)); },
        [](auto& c) { return std::to_string(c.misspelling_min_length); }};
    t["dict.affix_min_length"] = {
        [](auto& c, auto& k, auto& v) { c.affix_min_length = static_cast<std::size_t>(to_int(k, v, 1)); },
        [](auto& c) { return std::to_string(c.affix_min_length); }};
    for (TransformationKind kind : kAllTransformationKinds) {
      std::string name(kind_name(kind));
      for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      t["weights." + name] = {
          [kind](auto& c, auto& k, auto& v) { c.weights.set(kind, to_double(k, v)); },
          [kind](auto& c) { return fmt(c.weights[kind]); }};
    }
    t["embedding.dims"] = {
        [](auto& c, auto& k, auto& v) { c.method.dims = static_cast<Eigen::Index>(to_int(k, v, 1)); },
        [](auto& c) { return std::to_string(c.method.dims); }};
    t["learner.l2"] = {
        [](auto& c, auto& k, auto& v) {
          const double x = to_double(k, v);
          if (x < 0) bad_value(k, v, "a non-negative number");
          c.method.l2 = x;
        },
        [](auto& c) { return fmt(c.method.l2); }};
    t["sle.lambda"] = {
        [](auto& c, auto& k, auto& v) {
          if (v == "auto") {
            c.method.sle.lambda.reset();
            return;
          }
          const double x = to_double(k, v);
          if (x < 0) bad_value(k, v, "auto or a non-negative number");
          c.method.sle.lambda = x;
        },
        [](auto& c) { return c.method.sle.lambda ? fmt(*c.method.sle.lambda) : std::string("auto"); }};
    t["sle.lambda_ratio"] = {
        [](auto& c, auto& k, auto& v) {
          const double x = to_double(k, v);
          if (x < 0) bad_value(k, v, "a non-negative number");
          c.method.sle.lambda_ratio = x;
        },
        [](auto& c) { return fmt(c.method.sle.lambda_ratio); }};
    t["sle.max_outer_iters"] = {
        [](auto& c, auto& k, auto& v) { c.method.sle.max_outer_iters = static_cast<int>(to_int(k, v, 0)); },
        [](auto& c) { return std::to_string(c.method.sle.max_outer_iters); }};
    t["sle.inner_theta_steps"] = {
        [](auto& c, auto& k, auto& v) { c.method.sle.inner_theta_steps = static_cast<int>(to_int(k, v, 1)); },
        [](auto& c) { return std::to_string(c.method.sle.inner_theta_steps); }};
    t["sle.inner_embedding_steps"] = {
        [](auto& c, auto& k, auto& v) { c.method.sle.inner_embedding_steps = static_cast<int>(to_int(k, v, 1)); },
        [](auto& c) { return std::to_string(c.method.sle.inner_embedding_steps); }};
    t["sle.embedding_step"] = {
        [](auto& c, auto& k, auto& v) {
          const double x = to_double(k, v);
          if (x <= 0) bad_value(k, v, "a positive number");
          c.method.sle.embedding_step = x;
        },
        [](auto& c) { return fmt(c.method.sle.embedding_step); }};
    t["sle.tolerance"] = {
        [](auto& c, auto& k, auto& v) {
          const double x = to_double(k, v);
          if (x < 0) bad_value(k, v, "a non-negative number");
          c.method.sle.tolerance = x;
        },
        [](auto& c) { return fmt(c.method.sle.tolerance); }};
    t["knn.k"] = {
        [](auto& c, auto& k, auto& v) { c.method.knn.k = static_cast<std::size_t>(to_int(k, v, 1)); },
        [](auto& c) { return std::to_string(c.method.knn.k); }};
    t["knn.weighted"] = {[](auto& c, auto& k, auto& v) { c.method.knn.weighted = to_bool(k, v); },
                         [](auto& c) { return fmt(c.method.knn.weighted); }};
    t["lsi.tfidf"] = {[](auto& c, auto& k, auto& v) { c.method.tfidf = to_bool(k, v); },
                      [](auto& c) { return fmt(c.method.tfidf); }};
    t["cv.folds"] = {[](auto& c, auto& k, auto& v) { c.cv.folds = static_cast<int>(to_int(k, v, 2)); },
                     [](auto& c) { return std::to_string(c.cv.folds); }};
    t["cv.seed"] = {[](auto& c, auto& k, auto& v) { c.cv.seed = to_u64(k, v); },
                    [](auto& c) { return std::to_string(c.cv.seed); }};
    t["cv.joint_embed"] = {[](auto& c, auto& k, auto& v) { c.cv.joint_embed = to_bool(k, v); },
                           [](auto& c) { return fmt(c.cv.joint_embed); }};
    t["cv.retrain_auc"] = {[](auto& c, auto& k, auto& v) { c.method.retrain_auc = to_double(k, v); },
                           [](auto& c) { return fmt(c.method.retrain_auc); }};
    t["cv.max_attempts"] = {
        [](auto& c, auto& k, auto& v) { c.method.max_attempts = static_cast<int>(to_int(k, v, 1)); },
        [](auto& c) { return std::to_string(c.method.max_attempts); }};
    return t;
  }();
  return table;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text,
                                                    std::map<std::string, std::size_t>* lines) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, trim(line.substr(eq + 1))).second)
      throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(line_no) + ": duplicate key " + key);
    if (lines) (*lines)[key] = line_no;
  }
  return out;
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
  const auto& table = fields();
  const auto it = table.find(key);
  if (it == table.end()) throw Error(ErrorKind::InvalidConfig, "unknown key " + key);
  it->second.set(*this, key, value);
}

PipelineConfig PipelineConfig::parse(std::string_view text) {
  PipelineConfig config;
  std::map<std::string, std::size_t> lines;
  for (const auto& [k, v] : parse_key_values(text, &lines)) {
    try {
      config.set(k, v);
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(lines[k]) + ": " + e.message());
    }
  }
  return config;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string PipelineConfig::echo() const {
  std::string out;
  for (const auto& [k, f] : fields()) out += k + " = " + f.get(*this) + "\n";
  return out;
}

NormalizationConfig PipelineConfig::resolved_normalization() const {
  NormalizationConfig n = normalization;
  if (!stopwords_file.empty()) n.stop_words = load_stop_words(stopwords_file);
  return n;
}

MatchContext PipelineConfig::match_context() const {
  MatchContext ctx;
  ctx.weights = weights;
  if (!dict_dir.empty()) ctx.dictionary = TransformationDictionary::load(dict_dir);
  ctx.dictionary.misspelling_max_distance = misspelling_max_distance;
  ctx.dictionary.misspelling_min_length = misspelling_min_length;
  ctx.dictionary.affix_min_length = affix_min_length;
  ctx.max_tokens = normalization.max_tokens;
  return ctx;
}

}  // namespace sle
