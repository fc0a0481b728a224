#include "kcrf/synthetic.hpp"

#include <random>

#include "kcrf/error.hpp"

namespace kcrf {

namespace {

struct Slot {
  const char *form;  // nullptr: filled in at generation time
  const char *pos;
  int head;
  const char *rel;  // nullptr: slot relation (nmod:with or obl)
};

// Templates for sentences with a verb and a slot filler; the verb is at
// least five tokens away from the slot.
//   This <product> <verb> really well with my <X> .
//   It <verb> perfectly fine with the new <X> .
//   The <product> also <verb> nicely with my old <X> !
struct Template {
  std::vector<Slot> slots;
  int product;  // 0-based slot index, -1 if none
  int verb;
  int filler;
};

const std::vector<Template> &templates() {
  static const std::vector<Template> kTemplates = {
      {{{"This", "DT", 2, "det"},
        {nullptr, "NN", 3, "nsubj"},
        {nullptr, "VBZ", 0, "root"},
        {"really", "RB", 5, "advmod"},
        {"well", "RB", 3, "advmod"},
        {"with", "IN", 8, "case"},
        {"my", "PRP$", 8, "nmod:poss"},
        {nullptr, "NNP", 3, nullptr},
        {".", ".", 3, "punct"}},
       1, 2, 7},
      {{{"It", "PRP", 2, "nsubj"},
        {nullptr, "VBZ", 0, "root"},
        {"perfectly", "RB", 4, "advmod"},
        {"fine", "RB", 2, "advmod"},
        {"with", "IN", 8, "case"},
        {"the", "DT", 8, "det"},
        {"new", "JJ", 8, "amod"},
        {nullptr, "NNP", 2, nullptr},
        {".", ".", 2, "punct"}},
       -1, 1, 7},
      {{{"The", "DT", 2, "det"},
        {nullptr, "NN", 4, "nsubj"},
        {"also", "RB", 4, "advmod"},
        {nullptr, "VBZ", 0, "root"},
        {"nicely", "RB", 4, "advmod"},
        {"with", "IN", 9, "case"},
        {"my", "PRP$", 9, "nmod:poss"},
        {"old", "JJ", 9, "amod"},
        {nullptr, "NNP", 4, nullptr},
        {"!", ".", 4, "punct"}},
       1, 3, 8},
  };
  return kTemplates;
}

class Generator {
 public:
  Generator(std::uint64_t seed, const SyntheticConfig &config)
      : rng_(seed), config_(config) {}

  const std::string &pick(const std::vector<std::string> &pool) {
    std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
    return pool[d(rng_)];
  }

  double uniform() { return std::uniform_real_distribution<double>(0, 1)(rng_); }

  Sentence slot_sentence(const std::string &verb, const std::string &filler,
                         bool entity) {
    const auto &tpls = templates();
    std::uniform_int_distribution<std::size_t> d(0, tpls.size() - 1);
    const Template &tpl = tpls[d(rng_)];
    Sentence s;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < tpl.slots.size(); ++i) {
      const Slot &slot = tpl.slots[i];
      const int idx = static_cast<int>(i + 1);
      std::string form;
      if (slot.form) {
        form = slot.form;
      } else if (static_cast<int>(i) == tpl.product) {
        form = pick(config_.products);
      } else if (static_cast<int>(i) == tpl.verb) {
        form = verb;
      } else {
        form = filler;
      }
      s.tokens.push_back(Token{idx, form, slot.pos});
      s.arcs.push_back(DependencyArc{
          slot.rel ? slot.rel : (entity ? "nmod:with" : "obl"), slot.head,
          idx});
      labels.push_back(entity && static_cast<int>(i) == tpl.filler ? "ENT"
                                                                   : "O");
    }
    s.labels = std::move(labels);
    return s;
  }

  // The <product> is <adjective> .
  Sentence filler_sentence() {
    Sentence s;
    s.tokens = {Token{1, "The", "DT"}, Token{2, pick(config_.products), "NN"},
                Token{3, "is", "VBZ"}, Token{4, pick(config_.adjectives), "JJ"},
                Token{5, ".", "."}};
    s.arcs = {DependencyArc{"det", 2, 1}, DependencyArc{"nsubj", 4, 2},
              DependencyArc{"cop", 4, 3}, DependencyArc{"root", 0, 4},
              DependencyArc{"punct", 4, 5}};
    s.labels = std::vector<std::string>(5, "O");
    return s;
  }

 private:
  std::mt19937_64 rng_;
  const SyntheticConfig &config_;
};

void require(bool ok, const char *what) {
  if (!ok) throw ValidationError(std::string("synthetic config: ") + what);
}

}  // namespace

SyntheticCorpus generate_synthetic(std::uint64_t seed,
                                   const SyntheticConfig &c) {
  require(!c.products.empty(), "empty product pool");
  require(!c.train_verbs.empty(), "empty training verb pool");
  require(!c.rare_verbs.empty(), "empty rare verb pool");
  require(!c.rare_entities.empty(), "empty rare entity pool");
  require(!c.rare_other_verbs.empty(), "empty rare non-complement verb pool");
  require(!c.rare_objects.empty(), "empty rare object pool");
  require(c.train_pos_frequent_verb >= 0 && c.train_pos_rare_verb >= 0 &&
              c.train_neg_frequent_verb >= 0 && c.train_neg_rare_verb >= 0 &&
              c.train_pos_frequent_verb + c.train_pos_rare_verb +
                      c.train_neg_frequent_verb + c.train_neg_rare_verb <=
                  1.0,
          "bad training mixture");
  require(!c.expansion_verbs.empty(), "empty expansion verb pool");
  require(!c.other_verbs.empty(), "empty non-complement verb pool");
  require(!c.train_entities.empty(), "empty training entity pool");
  require(!c.unlabeled_entities.empty(), "empty unlabeled entity pool");
  require(!c.test_entities.empty(), "empty test entity pool");
  require(!c.objects.empty(), "empty object pool");
  require(!c.test_objects.empty(), "empty test object pool");
  require(!c.adjectives.empty(), "empty adjective pool");
  require(c.train_sentences > 0 && c.unlabeled_sentences >= 0 &&
              c.test_sentences > 0,
          "bad corpus sizes");
  for (const auto &v : c.expansion_verbs) {
    for (const auto &t : c.train_verbs) {
      require(v != t, "expansion verbs must not be training verbs");
    }
    for (const auto &t : c.rare_verbs) {
      require(v != t, "expansion verbs must not be training verbs");
    }
  }

  Generator g(seed, c);
  SyntheticCorpus out;

  // Training: frequent verbs with rare entities, rare verbs with frequent
  // entities, so each carries its own evidence.
  const double p1 = c.train_pos_frequent_verb;
  const double p2 = p1 + c.train_pos_rare_verb;
  const double p3 = p2 + c.train_neg_frequent_verb;
  const double p4 = p3 + c.train_neg_rare_verb;
  for (int i = 0; i < c.train_sentences; ++i) {
    const double u = g.uniform();
    if (u < p1) {
      out.train.push_back(g.slot_sentence(g.pick(c.train_verbs),
                                          g.pick(c.rare_entities), true));
    } else if (u < p2) {
      out.train.push_back(g.slot_sentence(g.pick(c.rare_verbs),
                                          g.pick(c.train_entities), true));
    } else if (u < p3) {
      out.train.push_back(g.slot_sentence(g.pick(c.other_verbs),
                                          g.pick(c.rare_objects), false));
    } else if (u < p4) {
      out.train.push_back(g.slot_sentence(g.pick(c.rare_other_verbs),
                                          g.pick(c.objects), false));
    } else {
      out.train.push_back(g.filler_sentence());
    }
  }

  for (int i = 0; i < c.unlabeled_sentences; ++i) {
    const double u = g.uniform();
    Sentence s;
    if (u < 0.10) {
      s = g.slot_sentence(g.pick(c.train_verbs), g.pick(c.train_entities),
                          true);
    } else if (u < 0.30) {
      s = g.slot_sentence(g.pick(c.train_verbs), g.pick(c.unlabeled_entities),
                          true);
    } else if (u < 0.45) {
      s = g.slot_sentence(g.pick(c.expansion_verbs), g.pick(c.train_entities),
                          true);
    } else if (u < 0.60) {
      s = g.slot_sentence(g.pick(c.expansion_verbs),
                          g.pick(c.unlabeled_entities), true);
    } else if (u < 0.90) {
      s = g.slot_sentence(g.pick(c.other_verbs), g.pick(c.objects), false);
    } else {
      s = g.filler_sentence();
    }
    s.labels.reset();
    out.unlabeled.push_back(std::move(s));
  }

  for (int i = 0; i < c.test_sentences; ++i) {
    const double u = g.uniform();
    if (u < 0.40) {
      out.expansion_test.push_back(out.test.size());
      out.test.push_back(g.slot_sentence(g.pick(c.expansion_verbs),
                                         g.pick(c.test_entities), true));
    } else if (u < 0.60) {
      out.test.push_back(g.slot_sentence(g.pick(c.train_verbs),
                                         g.pick(c.test_entities), true));
    } else if (u < 0.90) {
      out.test.push_back(g.slot_sentence(g.pick(c.other_verbs),
                                         g.pick(c.test_objects), false));
    } else {
      out.test.push_back(g.filler_sentence());
    }
  }
  return out;
}

}  // namespace kcrf
