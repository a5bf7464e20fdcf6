#include "sle/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "sle/config.hpp"
#include "sle/error.hpp"
#include "sle/text.hpp"

namespace sle {

namespace {

// Chief-complaint style phrasings grouped by underlying concept. Neighbouring
// clusters deliberately share words so that similarities are graded.
const std::vector<std::vector<std::string>> kPhraseBank = {
    {"chest pain with exercise", "exercise induced chest pain", "chest pain during sports",
     "chest pain when running"},
    {"chest pain at rest", "chest pain while sitting", "resting chest pain"},
    {"sharp chest pain", "stabbing chest pain", "sharp pain in chest"},
    {"chest tightness", "tight chest", "chest pressure"},
    {"heart racing", "rapid heartbeat", "fast heart rate", "heart pounding"},
    {"palpitations", "heart skipping beats", "irregular heartbeat", "fluttering in chest"},
    {"fainting", "passed out", "syncope", "loss of consciousness"},
    {"fainting with exercise", "passed out while running", "syncope during sports"},
    {"dizziness", "lightheaded", "dizzy spells", "feeling dizzy when standing"},
    {"shortness of breath", "difficulty breathing", "trouble breathing", "breathless"},
    {"shortness of breath with exercise", "exercise intolerance", "breathless during sports",
     "dyspnea on exertion"},
    {"heart murmur", "murmur heard by pediatrician", "abnormal heart sound"},
    {"family history of sudden death", "family history of sudden cardiac death",
     "relative died suddenly"},
    {"family history of cardiomyopathy", "father has cardiomyopathy", "mother has cardiomyopathy"},
    {"high blood pressure", "elevated blood pressure", "hypertension"},
    {"abnormal electrocardiogram", "abnormal ecg", "abnormal ekg reading"},
    {"fatigue", "tired all the time", "low energy", "easily tired"},
    {"headache", "frequent headaches", "head pain"},
    {"abdominal pain", "stomach ache", "belly pain"},
    {"anxiety", "panic attacks", "feeling anxious"},
    {"cough", "chronic cough", "coughing at night"},
    {"asthma", "wheezing", "asthma with exercise"},
    {"swelling in legs", "leg swelling", "ankle swelling"},
    {"blue lips", "cyanosis", "lips turn blue"},
    {"nausea", "vomiting", "feeling sick"},
    {"back pain", "upper back pain", "pain between shoulder blades"},
    {"rib pain", "pain in ribs", "costochondral pain"},
    {"acid reflux", "heartburn", "burning in chest"},
    {"sports physical", "preparticipation screening", "clearance for sports"},
    {"chest wall pain", "tender chest wall", "pain when pressing chest"},
    {"left arm pain", "pain in left arm", "arm numbness"},
    {"neck pain", "jaw pain", "pain radiating to neck"},
    {"cold sweats", "sweating with chest pain", "clammy skin"},
    {"slow heart rate", "bradycardia", "low heart rate"},
    {"seizure", "convulsions", "shaking episode"},
    {"weight loss", "poor appetite", "not eating well"},
    {"kawasaki disease history", "history of kawasaki disease", "treated for kawasaki"},
    {"congenital heart disease", "history of heart surgery", "repaired heart defect"},
    {"marfan features", "tall and thin with long arms", "marfan syndrome suspected"},
    {"chest pain after trauma", "chest injury", "hit in chest"},
};

const std::vector<std::string> kFillers = {"mild", "occasional", "some", "severe", "recent",
                                           "intermittent", "new", "worsening"};
const std::vector<std::string> kDelimiters = {", ", "; ", ". ", " / "};

constexpr const char* kSynonyms = R"(# one synonym group per line, comma separated
exercise, activity, sports, exertion, running
racing, pounding, rapid, fast
fainting, syncope, fainted
dizziness, lightheadedness
dizzy, lightheaded
breathing, respiration
breathless, winded
heartbeat, pulse
stomach, belly, abdominal
ache, pain
sharp, stabbing
tired, fatigued, exhausted
tightness, pressure
swelling, edema
legs, ankles
abnormal, irregular
father, dad
mother, mom
elevated, high
sick, ill, nauseous
frequent, recurrent
seizure, convulsions
anxiety, nervousness
injury, trauma
)";

constexpr const char* kAcronyms = R"(# short = expansion (stop words already removed)
cp = chest pain
sob = shortness breath
loc = loss consciousness
fhx = family history
hr = heart rate
bp = blood pressure
htn = hypertension
chd = congenital heart disease
scd = sudden cardiac death
kd = kawasaki disease
ecg = electrocardiogram
ekg = electrocardiogram
doe = dyspnea exertion
)";

constexpr const char* kAbbreviations = R"(# short = long
hx = history
hist = history
abd = abdominal
freq = frequent
sx = symptoms
palp = palpitations
exer = exercise
dx = diagnosis
fam = family
resp = respiratory
ht = heart
hb = heartbeat
)";

std::vector<std::string> words_of(const std::string& phrase) {
  std::istringstream in(phrase);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

class Perturber {
 public:
  Perturber(double p, std::mt19937_64& rng) : p_(p), rng_(rng) {
    const auto& dict = dictionary();
    for (const auto& [token, groups] : dict.synonym_groups) {
      for (const auto& [other, other_groups] : dict.synonym_groups) {
        if (other == token) continue;
        for (auto g : groups)
          if (other_groups.contains(g)) {
            synonyms_[token].push_back(other);
            break;
          }
      }
    }
    for (const auto& [short_form, longs] : dict.abbreviations)
      for (const auto& l : longs) shorts_[l].push_back(short_form);
    for (const auto& [short_form, expansions] : dict.acronyms)
      for (const auto& e : expansions) acronyms_.emplace_back(e, short_form);
  }

  std::string statement(const std::string& phrase) {
    std::vector<std::string> words = words_of(phrase);
    replace_acronyms(words);
    for (auto& w : words)
      if (!stop_.contains(w) && coin(p_)) w = perturb_word(w);
    if (words.size() >= 2 && coin(p_ / 3)) {
      const auto i = pick(words.size() - 1);
      if (!stop_.contains(words[i]) && !stop_.contains(words[i + 1])) {
        words[i] += words[i + 1];
        words.erase(words.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      }
    }
    if (coin(p_ / 2)) words.insert(words.begin(), kFillers[pick(kFillers.size())]);
    return join(words);
  }

  bool coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 private:
  static const TransformationDictionary& dictionary() {
    static const TransformationDictionary d = synthetic_dictionary();
    return d;
  }

  void replace_acronyms(std::vector<std::string>& words) {
    std::vector<std::size_t> content;
    for (std::size_t i = 0; i < words.size(); ++i)
      if (!stop_.contains(words[i])) content.push_back(i);
    for (const auto& [expansion, short_form] : acronyms_) {
      if (expansion.size() > content.size()) continue;
      for (std::size_t s = 0; s + expansion.size() <= content.size(); ++s) {
        bool match = true;
        for (std::size_t j = 0; j < expansion.size() && match; ++j)
          match = words[content[s + j]] == expansion[j];
        if (!match || !coin(p_ * 2)) continue;
        const auto first = static_cast<std::ptrdiff_t>(content[s]);
        const auto last = static_cast<std::ptrdiff_t>(content[s + expansion.size() - 1]);
        words.erase(words.begin() + first + 1, words.begin() + last + 1);
        words[static_cast<std::size_t>(first)] = short_form;
        return;
      }
    }
  }

  std::string perturb_word(const std::string& w) {
    // candidate operations with integer weights
    std::vector<std::pair<int, int>> ops;
    if (synonyms_.contains(w)) ops.emplace_back(0, 3);
    if (shorts_.contains(w)) ops.emplace_back(1, 2);
    if (w.size() >= 5) ops.emplace_back(2, 3);
    if (w.size() >= 6) ops.emplace_back(3, 1);
    if (w.size() >= 8) ops.emplace_back(4, 1);
    if (ops.empty()) return w;
    int total = 0;
    for (const auto& [op, weight] : ops) total += weight;
    int r = static_cast<int>(pick(static_cast<std::size_t>(total)));
    int op = ops.back().first;
    for (const auto& [o, weight] : ops) {
      if (r < weight) {
        op = o;
        break;
      }
      r -= weight;
    }
    switch (op) {
      case 0: {
        const auto& alts = synonyms_.at(w);
        return alts[pick(alts.size())];
      }
      case 1: {
        const auto& alts = shorts_.at(w);
        return alts[pick(alts.size())];
      }
      case 2: return misspell(w);
      case 3: return w.substr(0, 4 + pick(w.size() - 5));
      default: return w.substr(2 + pick(std::min<std::size_t>(3, w.size() - 6)));
    }
  }

  std::string misspell(const std::string& w) {
    std::string out = w;
    const std::size_t i = 1 + pick(w.size() - 2);
    switch (pick(3)) {
      case 0:
        if (out[i] != out[i - 1]) {
          std::swap(out[i], out[i - 1]);
          return out;
        }
        [[fallthrough]];
      case 1:
        out.erase(i, 1);
        return out;
      default: {
        char c = static_cast<char>('a' + pick(26));
        if (c == out[i]) c = c == 'z' ? 'a' : static_cast<char>(c + 1);
        out[i] = c;
        return out;
      }
    }
  }

  double p_;
  std::mt19937_64& rng_;
  std::set<std::string, std::less<>> stop_ = NormalizationConfig::default_stop_words();
  std::map<std::string, std::vector<std::string>> synonyms_;
  std::map<std::string, std::vector<std::string>> shorts_;
  std::vector<std::pair<std::vector<std::string>, std::string>> acronyms_;
};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidSpec, what); }

}  // namespace

std::size_t synthetic_cluster_count() { return kPhraseBank.size(); }

const std::vector<std::string>& synthetic_phrases(std::size_t c) { return kPhraseBank.at(c); }

const DictionaryFiles& synthetic_dictionary_files() {
  static const DictionaryFiles files{kSynonyms, kAcronyms, kAbbreviations};
  return files;
}

TransformationDictionary synthetic_dictionary() {
  const auto& f = synthetic_dictionary_files();
  return TransformationDictionary::parse(f.synonyms, f.acronyms, f.abbreviations);
}

SyntheticSpec SyntheticSpec::parse(std::string_view text) {
  SyntheticSpec spec;
  std::map<std::string, std::string> kv;
  try {
    kv = parse_key_values(text);
  } catch (const Error& e) {
    invalid(e.what());
  }
  for (const auto& [key, value] : kv) {
    auto as_double = [&] {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != value.size() || !std::isfinite(v)) invalid(key + ": expected a number");
      return v;
    };
    auto as_size = [&] {
      const double v = as_double();
      if (v < 0 || v != std::floor(v)) invalid(key + ": expected a non-negative integer");
      return static_cast<std::size_t>(v);
    };
    if (key == "records") spec.records = as_size();
    else if (key == "numeric_dims") spec.numeric_dims = as_size();
    else if (key == "clusters") spec.clusters = as_size();
    else if (key == "text_weight") spec.text_weight = as_double();
    else if (key == "noise") spec.noise = as_double();
    else if (key == "prevalence") spec.prevalence = as_double();
    else if (key == "max_statements") spec.max_statements = as_size();
    else if (key == "perturbation") spec.perturbation = as_double();
    else invalid("unknown key " + key);
  }
  spec.validate();
  return spec;
}

SyntheticSpec SyntheticSpec::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void SyntheticSpec::validate() const {
  if (records < 2) invalid("records must be at least 2");
  if (clusters < 1 || clusters > synthetic_cluster_count())
    invalid("clusters must be in [1, " + std::to_string(synthetic_cluster_count()) + "]");
  if (max_statements < 1) invalid("max_statements must be at least 1");
  if (!(text_weight >= 0 && text_weight <= 1)) invalid("text_weight must be in [0, 1]");
  if (!(noise >= 0 && noise <= 0.5)) invalid("noise must be in [0, 0.5]");
  if (!(prevalence > 0 && prevalence < 1)) invalid("prevalence must be in (0, 1)");
  if (!(perturbation >= 0 && perturbation <= 1)) invalid("perturbation must be in [0, 1]");
  if (numeric_dims == 0 && text_weight < 1) invalid("numeric_dims = 0 requires text_weight = 1");
}

std::string SyntheticSpec::echo() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "clusters = %zu\nmax_statements = %zu\nnoise = %.17g\nnumeric_dims = %zu\n"
                "perturbation = %.17g\nprevalence = %.17g\nrecords = %zu\ntext_weight = %.17g\n",
                clusters, max_statements, noise, numeric_dims, perturbation, prevalence, records,
                text_weight);
  return buf;
}

SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t m = spec.records, d = spec.numeric_dims, k = spec.clusters;

  // label model
  std::vector<double> beta(d);
  for (auto& b : beta) b = normal(rng);
  const double beta_norm = std::sqrt(std::inner_product(beta.begin(), beta.end(), beta.begin(), 0.0));
  std::vector<double> effect(k);
  for (auto& e : effect) e = normal(rng);
  if (k > 1) {
    const double mean = std::accumulate(effect.begin(), effect.end(), 0.0) / static_cast<double>(k);
    double var = 0.0;
    for (double e : effect) var += (e - mean) * (e - mean);
    const double sd = std::sqrt(var / static_cast<double>(k));
    for (auto& e : effect) e = sd > 0 ? (e - mean) / sd : 0.0;
  } else {
    effect[0] = 0.0;
  }

  SyntheticData out;
  out.records.resize(m);
  out.clusters.resize(m);
  std::vector<double> score(m);
  Perturber perturber(spec.perturbation, rng);
  for (std::size_t i = 0; i < m; ++i) {
    auto& rec = out.records[i];
    char id[32];
    std::snprintf(id, sizeof id, "r%05zu", i + 1);
    rec.id = id;
    rec.numeric.resize(d);
    double z = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      rec.numeric[j] = normal(rng);
      z += beta[j] * rec.numeric[j];
    }
    if (beta_norm > 0) z /= beta_norm;

    const std::size_t c = perturber.pick(k);
    out.clusters[i] = static_cast<int>(c);
    std::size_t statements = 1;
    while (statements < spec.max_statements && perturber.coin(0.4)) ++statements;
    std::string text;
    for (std::size_t s = 0; s < statements; ++s) {
      const std::size_t cluster = s == 0 ? c : perturber.pick(kPhraseBank.size());
      const auto& phrases = kPhraseBank[cluster];
      if (s > 0) text += kDelimiters[perturber.pick(kDelimiters.size())];
      text += perturber.statement(phrases[perturber.pick(phrases.size())]);
    }
    if (!text.empty() && perturber.coin(0.5))
      text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    rec.text = std::move(text);
    score[i] = (1.0 - spec.text_weight) * z + spec.text_weight * effect[c];
  }

  // threshold at the (1 - prevalence) quantile, ties broken by index
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return score[a] > score[b]; });
  const auto positives = std::max<std::size_t>(
      1, std::min<std::size_t>(m - 1, static_cast<std::size_t>(std::llround(spec.prevalence * static_cast<double>(m)))));
  for (std::size_t r = 0; r < m; ++r) out.records[order[r]].label = r < positives ? 1 : 0;
  for (std::size_t i = 0; i < m; ++i)
    if (spec.noise > 0 && perturber.coin(spec.noise)) out.records[i].label = 1 - *out.records[i].label;
  return out;
}

}  // namespace sle
