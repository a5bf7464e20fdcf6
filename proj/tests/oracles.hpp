// Brute-force reference implementations used by the tests. They are written
// from the definitions, not from the production code paths.
#ifndef SLE_TESTS_ORACLES_HPP
#define SLE_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sle/transform.hpp"

namespace oracle {

using sle::Statement;
using sle::TransformationDictionary;
using sle::TransformationKind;
using sle::TransformationVector;
using sle::TransformWeights;

// restricted Damerau-Levenshtein by plain recursion with memo
inline std::size_t osa(const std::string& a, const std::string& b) {
  std::vector<std::vector<long>> memo(a.size() + 1, std::vector<long>(b.size() + 1, -1));
  std::function<long(std::size_t, std::size_t)> d = [&](std::size_t i, std::size_t j) -> long {
    if (i == 0) return static_cast<long>(j);
    if (j == 0) return static_cast<long>(i);
    long& m = memo[i][j];
    if (m >= 0) return m;
    long best = std::min(d(i - 1, j) + 1, d(i, j - 1) + 1);
    best = std::min(best, d(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1));
    if (i >= 2 && j >= 2 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) best = std::min(best, d(i - 2, j - 2) + 1);
    return m = best;
  };
  return static_cast<std::size_t>(d(a.size(), b.size()));
}

inline bool same_synonym_group(const TransformationDictionary& dict, const std::string& x, const std::string& y) {
  auto ix = dict.synonym_groups.find(x), iy = dict.synonym_groups.find(y);
  if (ix == dict.synonym_groups.end() || iy == dict.synonym_groups.end()) return false;
  for (auto g : ix->second)
    if (iy->second.count(g)) return true;
  return false;
}

inline bool is_short_for(const TransformationDictionary& dict, const std::string& s, const std::string& l) {
  auto it = dict.abbreviations.find(s);
  return it != dict.abbreviations.end() && it->second.count(l) > 0;
}

/// Kinds relating two distinct single tokens (Equal when identical).
inline std::vector<TransformationKind> one_to_one(const TransformationDictionary& dict, const std::string& x,
                                                  const std::string& y) {
  std::vector<TransformationKind> out;
  if (x == y) return {TransformationKind::Equal};
  if (same_synonym_group(dict, x, y)) out.push_back(TransformationKind::Synonym);
  if (x.size() >= dict.misspelling_min_length && y.size() >= dict.misspelling_min_length &&
      osa(x, y) <= dict.misspelling_max_distance)
    out.push_back(TransformationKind::Misspelling);
  if (is_short_for(dict, x, y) || is_short_for(dict, y, x)) out.push_back(TransformationKind::Abbreviation);
  const std::string& s = x.size() < y.size() ? x : y;
  const std::string& l = x.size() < y.size() ? y : x;
  if (s.size() >= dict.affix_min_length && s.size() < l.size()) {
    if (l.compare(0, s.size(), s) == 0) out.push_back(TransformationKind::Prefix);
    if (l.compare(l.size() - s.size(), s.size(), s) == 0) out.push_back(TransformationKind::Suffix);
  }
  return out;
}

/// Kinds relating one token to a run of consecutive tokens.
inline std::vector<TransformationKind> one_to_run(const TransformationDictionary& dict, const std::string& t,
                                                  const std::vector<std::string>& run) {
  std::vector<TransformationKind> out;
  bool acronym = false;
  if (run.size() >= 2 && t.size() == run.size()) {
    acronym = true;
    for (std::size_t q = 0; q < run.size(); ++q) acronym = acronym && run[q][0] == t[q];
  }
  if (auto it = dict.acronyms.find(t); it != dict.acronyms.end() && it->second.count(run)) acronym = true;
  if (acronym) out.push_back(TransformationKind::Acronym);
  if (run.size() >= 2) {
    std::string joined;
    for (const auto& r : run) joined += r;
    if (joined == t) out.push_back(TransformationKind::Concatenation);
  }
  return out;
}

struct Edge {
  TransformationKind kind;
  std::vector<std::size_t> a, b;
};

/// Every valid non-Missing transformation, found by scanning all token
/// subsets of both sides.
inline std::vector<Edge> all_edges(const Statement& a, const Statement& b, const TransformationDictionary& dict) {
  std::vector<Edge> edges;
  const std::size_t na = a.tokens.size(), nb = b.tokens.size();
  auto members = [](unsigned mask, std::size_t n) {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) v.push_back(i);
    return v;
  };
  auto contiguous = [](const std::vector<std::size_t>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] != v[i - 1] + 1) return false;
    return true;
  };
  for (unsigned ma = 1; ma < (1u << na); ++ma) {
    for (unsigned mb = 1; mb < (1u << nb); ++mb) {
      const auto A = members(ma, na), B = members(mb, nb);
      std::vector<TransformationKind> kinds;
      if (A.size() == 1 && B.size() == 1) {
        kinds = one_to_one(dict, a.tokens[A[0]], b.tokens[B[0]]);
        for (auto k : one_to_run(dict, a.tokens[A[0]], {b.tokens[B[0]]})) kinds.push_back(k);
        for (auto k : one_to_run(dict, b.tokens[B[0]], {a.tokens[A[0]]})) kinds.push_back(k);
      } else if (A.size() == 1 && contiguous(B)) {
        std::vector<std::string> run;
        for (auto i : B) run.push_back(b.tokens[i]);
        kinds = one_to_run(dict, a.tokens[A[0]], run);
      } else if (B.size() == 1 && contiguous(A)) {
        std::vector<std::string> run;
        for (auto i : A) run.push_back(a.tokens[i]);
        kinds = one_to_run(dict, b.tokens[B[0]], run);
      }
      std::sort(kinds.begin(), kinds.end());
      kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
      for (auto k : kinds) edges.push_back({k, A, B});
    }
  }
  return edges;
}

/// All complete consistent transformation vectors: every subset of pairwise
/// disjoint edges, with uncovered tokens Missing.
inline std::set<TransformationVector> all_vectors(const Statement& a, const Statement& b,
                                                  const TransformationDictionary& dict) {
  const auto edges = all_edges(a, b, dict);
  std::set<TransformationVector> out;
  std::vector<bool> used_a(a.tokens.size()), used_b(b.tokens.size());
  TransformationVector c;
  std::function<void(std::size_t)> rec = [&](std::size_t e) {
    if (e == edges.size()) {
      TransformationVector full = c;
      for (bool u : used_a) full[TransformationKind::Missing] += u ? 0 : 1;
      for (bool u : used_b) full[TransformationKind::Missing] += u ? 0 : 1;
      out.insert(full);
      return;
    }
    rec(e + 1);
    const auto& edge = edges[e];
    for (auto i : edge.a)
      if (used_a[i]) return;
    for (auto i : edge.b)
      if (used_b[i]) return;
    for (auto i : edge.a) used_a[i] = true;
    for (auto i : edge.b) used_b[i] = true;
    ++c[edge.kind];
    rec(e + 1);
    --c[edge.kind];
    for (auto i : edge.a) used_a[i] = false;
    for (auto i : edge.b) used_b[i] = false;
  };
  rec(0);
  return out;
}

inline double vector_score(const TransformationVector& c, const TransformWeights& w) {
  return w.score(c);
}

inline double statement_similarity(const Statement& a, const Statement& b, const TransformWeights& w,
                                   const TransformationDictionary& dict) {
  double best = 0.0;
  for (const auto& c : all_vectors(a, b, dict)) best = std::max(best, vector_score(c, w));
  return best;
}

/// Maximum over all consistent (possibly partial) statement pairings of the
/// sum of paired similarities, summed in ascending order.
inline double best_pairing(const Eigen::MatrixXd& s) {
  const auto r1 = s.rows(), r2 = s.cols();
  std::vector<bool> used(static_cast<std::size_t>(r2));
  std::vector<double> picked;
  double best = 0.0;
  std::function<void(Eigen::Index)> rec = [&](Eigen::Index j) {
    if (j == r1) {
      std::vector<double> v = picked;
      std::sort(v.begin(), v.end());
      double sum = 0.0;
      for (double x : v) sum += x;
      best = std::max(best, sum);
      return;
    }
    rec(j + 1);  // statement j unpaired
    for (Eigen::Index l = 0; l < r2; ++l) {
      if (used[static_cast<std::size_t>(l)]) continue;
      used[static_cast<std::size_t>(l)] = true;
      picked.push_back(s(j, l));
      rec(j + 1);
      picked.pop_back();
      used[static_cast<std::size_t>(l)] = false;
    }
  };
  rec(0);
  return best;
}

/// Central finite-difference gradient of f at x.
template <typename F>
Eigen::MatrixXd numeric_gradient(F f, Eigen::MatrixXd x, double h = 1e-6) {
  Eigen::MatrixXd g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double orig = x.data()[i];
    x.data()[i] = orig + h;
    const double fp = f(x);
    x.data()[i] = orig - h;
    const double fm = f(x);
    x.data()[i] = orig;
    g.data()[i] = (fp - fm) / (2 * h);
  }
  return g;
}

inline double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-12});
  return (a - b).norm() / scale;
}

/// Φ = ½ Σ_ij S_ij ‖x_i − x_j‖².
inline double phi_pairwise(const Eigen::MatrixXd& s, const Eigen::MatrixXd& x) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = 0; j < s.cols(); ++j) total += s(i, j) * (x.row(i) - x.row(j)).squaredNorm();
  return 0.5 * total;
}

/// AUC as the fraction of positive/negative pairs ranked correctly, ties ½.
inline double pair_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[i] == 1 && y[j] == 0) {
        pairs += 1;
        wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
  return wins / pairs;
}

inline double mcc_formula(double tp, double fp, double tn, double fn) {
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  return den == 0 ? 0.0 : (tp * tn - fp * fn) / std::sqrt(den);
}

/// Best MCC over every threshold in {-inf, each score, +inf} with positive
/// meaning score > threshold.
inline double best_mcc(const std::vector<double>& s, const std::vector<int>& y) {
  std::vector<double> cuts = s;
  cuts.push_back(-std::numeric_limits<double>::infinity());
  cuts.push_back(std::numeric_limits<double>::infinity());
  double best = -2.0;
  for (double t : cuts) {
    double tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const bool pos = s[i] > t;
      if (pos && y[i]) ++tp;
      else if (pos) ++fp;
      else if (y[i]) ++fn;
      else ++tn;
    }
    best = std::max(best, mcc_formula(tp, fp, tn, fn));
  }
  return best;
}

/// Random symmetric similarity matrix with unit diagonal and a connected
/// graph (every off-diagonal entry positive).
inline Eigen::MatrixXd random_similarity(Eigen::Index m, std::mt19937_64& rng, double zero_fraction = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) {
      double v = u(rng);
      if (u(rng) < zero_fraction && j != i + 1) v = 0.0;
      s(i, j) = s(j, i) = std::max(v, 1e-3);
      if (v == 0.0) s(i, j) = s(j, i) = 0.0;
    }
  return s;
}

}  // namespace oracle

#endif  // SLE_TESTS_ORACLES_HPP
