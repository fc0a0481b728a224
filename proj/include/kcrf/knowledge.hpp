#ifndef KCRF_KNOWLEDGE_HPP_
#define KCRF_KNOWLEDGE_HPP_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "kcrf/corpus.hpp"
#include "kcrf/crf.hpp"
#include "kcrf/knowledge_base.hpp"

namespace kcrf {

inline constexpr double kDefaultDelta = 0.3;

// Softmax of one feature's per-tag weights.
std::vector<double> tag_distribution(std::span<const double> weights);

// Shannon entropy in nats; 0 log 0 counts as 0.
double feature_entropy(std::span<const double> p);

struct SelectionEntry {
  int feature = -1;
  std::string name;
  std::vector<double> distribution;
  double entropy = 0.0;
  std::optional<int> winner;  // unique argmax tag, if any
  bool selected = false;
};

struct KnowledgeSelection {
  double delta = kDefaultDelta;
  double max_entropy = 0.0;  // ln |T|
  // Indexed by tag position in the model's tag set.
  std::vector<std::set<int>> features;
  std::vector<std::set<KnowledgeType>> types;
  // One entry per primitive feature with a non-zero weight row.
  std::vector<SelectionEntry> report;
};

// A feature r goes to tag t when H(r) < delta and t is the unique argmax of
// its tag distribution. Only primitive-family features are eligible, and
// all-zero weight rows are skipped. Requires a primitive-preset model.
KnowledgeSelection select_knowledge_types(const Model &m,
                                          double delta = kDefaultDelta);

// KB^t[k] = values of the selected features of t whose type is k. When
// `corpus` is given, only pairs witnessed by some token of it are kept.
KnowledgeBase build_initial_kb(const KnowledgeSelection &selection,
                               const Model &m,
                               const std::vector<Sentence> *corpus = nullptr);

std::string format_selection_report(const KnowledgeSelection &selection,
                                    const TagSet &tags);

}  // namespace kcrf

#endif  // KCRF_KNOWLEDGE_HPP_
