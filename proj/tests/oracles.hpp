// Brute-force reference implementations and random instance generators
// shared by the unit tests and the acceptance runner. Nothing here calls the
// code under test for the quantity being checked.
#ifndef KCRF_TESTS_ORACLES_HPP_
#define KCRF_TESTS_ORACLES_HPP_

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "kcrf/corpus.hpp"
#include "kcrf/crf.hpp"
#include "kcrf/features.hpp"
#include "kcrf/knowledge_base.hpp"

namespace oracle {

using Rng = std::mt19937_64;

inline double uniform(Rng &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}
inline int uniform_int(Rng &rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline kcrf::TagSet tagset(int n) {
  static const char *names[] = {"ENT", "O", "X", "Y", "Z"};
  std::vector<std::string> t(names, names + n);
  return kcrf::TagSet(t);
}

inline kcrf::FeatureVocabulary numbered_vocab(int m) {
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back("f" + std::to_string(i));
  return kcrf::FeatureVocabulary(names);
}

// Model over features f0..f{m-1} with weights drawn from [-w, w]. With
// `integral` the weights are whole numbers, which makes ties common and exact.
inline kcrf::Model random_model(Rng &rng, int m, int tags, double w,
                                bool integral = false) {
  kcrf::Model model(tagset(tags), numbered_vocab(m),
                    kcrf::FeatureConfig{kcrf::Preset::kBasic}, 1.0);
  for (double &p : model.parameters()) {
    p = integral ? static_cast<double>(uniform_int(rng, -static_cast<int>(w),
                                                   static_cast<int>(w)))
                 : uniform(rng, -w, w);
  }
  return model;
}

inline kcrf::FeatureVectorSeq random_x(Rng &rng, int len, int m) {
  kcrf::FeatureVectorSeq x(len);
  for (auto &pos : x) {
    for (int r = 0; r < m; ++r) {
      if (uniform_int(rng, 0, 2) == 0) pos.push_back(r);
    }
  }
  return x;
}

inline double path_score(const kcrf::Model &m, const kcrf::FeatureVectorSeq &x,
                         const std::vector<int> &y) {
  double s = 0.0;
  int prev = m.bos();
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (int r : x[n]) s += m.state(r, y[n]);
    s += m.transition(prev, y[n]);
    prev = y[n];
  }
  return s;
}

// Every tag sequence of length `len` over `tags` tags, in lexicographic order.
inline std::vector<std::vector<int>> all_paths(int len, int tags) {
  std::vector<std::vector<int>> out;
  std::vector<int> y(len, 0);
  while (true) {
    out.push_back(y);
    int i = len - 1;
    while (i >= 0 && ++y[i] == tags) y[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

struct Enumeration {
  double log_z = 0.0;
  std::vector<std::vector<double>> marginals;  // [n][t]
  std::vector<int> argmax;
};

// Exhaustive inference. Among paths with the highest score the argmax is the
// one that is smallest when compared from the last position backwards, which
// is what earlier-tag-wins tie breaking at every backpointer produces.
inline Enumeration enumerate(const kcrf::Model &m,
                             const kcrf::FeatureVectorSeq &x) {
  const int len = static_cast<int>(x.size());
  const int tags = static_cast<int>(m.num_tags());
  auto paths = all_paths(len, tags);
  std::vector<double> scores;
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto &y : paths) {
    scores.push_back(path_score(m, x, y));
    hi = std::max(hi, scores.back());
  }
  Enumeration e;
  double z = 0.0;
  for (double s : scores) z += std::exp(s - hi);
  e.log_z = hi + std::log(z);
  e.marginals.assign(len, std::vector<double>(tags, 0.0));
  bool have = false;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    double p = std::exp(scores[i] - e.log_z);
    for (int n = 0; n < len; ++n) e.marginals[n][paths[i][n]] += p;
    if (scores[i] == hi) {
      std::vector<int> rev(paths[i].rbegin(), paths[i].rend());
      std::vector<int> cur(e.argmax.rbegin(), e.argmax.rend());
      if (!have || rev < cur) e.argmax = paths[i];
      have = true;
    }
  }
  return e;
}

// Random dependency-parsed sentence over a small vocabulary so that values
// repeat across sentences and KBs.
inline kcrf::Sentence random_sentence(Rng &rng, int max_len = 7) {
  static const char *forms[] = {"iPhone", "works", "holds", "Stand", "my",
                                "with", "tablet", "Case", "fits", "it"};
  static const char *tags[] = {"NN", "NNP", "VBZ", "PRP$", "IN", "DT"};
  static const char *rels[] = {"nmod:with", "nsubj", "det", "nmod:poss",
                               "obl", "case"};
  kcrf::Sentence s;
  const int len = uniform_int(rng, 1, max_len);
  for (int i = 1; i <= len; ++i) {
    s.tokens.push_back({i, forms[uniform_int(rng, 0, 9)],
                        tags[uniform_int(rng, 0, 5)]});
  }
  for (int d = 1; d <= len; ++d) {
    int gov = uniform_int(rng, 0, len);
    if (gov == d) gov = 0;
    s.arcs.push_back({rels[uniform_int(rng, 0, 5)], gov, d});
  }
  // An occasional extra arc so tokens can hold several relations.
  if (len > 1 && uniform_int(rng, 0, 1) == 0) {
    int d = uniform_int(rng, 1, len);
    int g = uniform_int(rng, 1, len);
    if (g != d) s.arcs.push_back({rels[uniform_int(rng, 0, 5)], g, d});
  }
  return s;
}

// Random KB drawn from the same universe as random_sentence.
inline kcrf::KnowledgeBase random_kb(Rng &rng, int entries) {
  static const char *values[] = {"iphone", "works", "holds", "stand", "my",
                                 "with", "tablet", "case", "fits", "it"};
  static const char *pos[] = {"NN", "NNP", "VBZ", "PRP$", "IN", "DT"};
  static const char *rels[] = {"nmod:with", "nsubj", "det", "nmod:poss",
                               "obl", "case"};
  kcrf::KnowledgeBase kb;
  for (int i = 0; i < entries; ++i) {
    const std::string tag = uniform_int(rng, 0, 1) ? "ENT" : "O";
    kcrf::KnowledgeType k =
        uniform_int(rng, 0, 2) == 0
            ? kcrf::KnowledgeType::word()
            : kcrf::KnowledgeType::dep_pattern(
                  uniform_int(rng, 0, 1) ? kcrf::Role::kGov : kcrf::Role::kDep,
                  rels[uniform_int(rng, 0, 5)], pos[uniform_int(rng, 0, 5)]);
    kb.add(tag, k, values[uniform_int(rng, 0, 9)]);
  }
  return kb;
}

inline std::string lower(const std::string &s) {
  std::string out = s;
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Knowledge indicators of token n by walking every KB entry and checking it
// against the token and its raw arcs.
inline std::set<std::pair<std::string, std::string>> knowledge_by_enumeration(
    const kcrf::Sentence &s, int n, const kcrf::KnowledgeBase &kb) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto &t : kb.triples()) {
    bool hit = false;
    if (t.type.is_word()) {
      hit = lower(s.tokens[n - 1].form) == t.value;
    } else {
      for (const auto &a : s.arcs) {
        if (a.gov == 0) continue;
        if (a.gov == n) {
          const auto &o = s.tokens[a.dep - 1];
          hit |= t.type.str() == "[GOV|" + a.type + "|" + o.pos + "]" &&
                 lower(o.form) == t.value;
        }
        if (a.dep == n) {
          const auto &o = s.tokens[a.gov - 1];
          hit |= t.type.str() == "[DEP|" + a.type + "|" + o.pos + "]" &&
                 lower(o.form) == t.value;
        }
      }
    }
    if (hit) out.insert({t.tag, t.type.str()});
  }
  return out;
}

// Central finite difference of the objective along one coordinate.
inline double finite_difference(kcrf::Model m,
                                std::span<const kcrf::LabeledSequence> batch,
                                std::size_t i, double h) {
  const double w = m.parameters()[i];
  m.parameters()[i] = w + h;
  const double up = kcrf::nll_and_gradient(m, batch).value;
  m.parameters()[i] = w - h;
  const double down = kcrf::nll_and_gradient(m, batch).value;
  return (up - down) / (2 * h);
}

}  // namespace oracle

#endif  // KCRF_TESTS_ORACLES_HPP_
