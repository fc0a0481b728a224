#ifndef KCRF_EXPANSION_HPP_
#define KCRF_EXPANSION_HPP_

#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kcrf/corpus.hpp"
#include "kcrf/crf.hpp"
#include "kcrf/knowledge_base.hpp"

namespace kcrf {

inline constexpr double kDefaultDeltaPrime = 0.8;
inline constexpr int kDefaultMaxIters = 10;

// Candidate knowledge per tag, same shape as a knowledge base.
using CandidateKB = KnowledgeBase;

// Knowledge types each tag may harvest, keyed by tag name.
using TypesByTag = std::map<std::string, std::set<KnowledgeType>>;

struct ReliablePrediction {
  int position;  // 1-based
  int tag;

  bool operator==(const ReliablePrediction &) const = default;
};

// Positions whose largest tag marginal exceeds delta_prime under the model
// and the current KB.
std::vector<ReliablePrediction> reliable_positions(const Model &m,
                                                   const KnowledgeBase &kb,
                                                   const Sentence &s,
                                                   double delta_prime);

// For each reliable (n, t) adds every (k, v) of token n with k among t's
// harvestable types, unless KB^t already holds it.
CandidateKB collect_candidates(const Sentence &s,
                               const std::vector<ReliablePrediction> &reliable,
                               const TypesByTag &types,
                               const KnowledgeBase &kb, const TagSet &tags);

// Drops every (k, v) proposed for two or more tags.
CandidateKB prune(const CandidateKB &candidates);

// Types present per tag in a knowledge base.
TypesByTag types_of(const KnowledgeBase &kb);

struct ExpansionOptions {
  double delta_prime = kDefaultDeltaPrime;
  int max_iters = kDefaultMaxIters;
  // Also drop candidates that another tag's current KB already holds.
  bool strict_prune = false;
  // Called after every iteration with the raw and the kept candidates and
  // the KB after the update.
  std::function<void(int iteration, const CandidateKB &raw,
                     const CandidateKB &kept, const KnowledgeBase &kb)>
      on_iteration;
};

struct TraceRecord {
  int iteration;
  std::string tag;
  std::size_t reliable_count;
  std::size_t candidates_raw;
  std::size_t candidates_pruned;  // surviving after pruning
  std::size_t kb_size;            // KB^tag size after the update
};

struct ExpansionTrace {
  std::vector<TraceRecord> records;
  int iterations = 0;
  bool reached_max_iters = false;
};

struct ExpansionResult {
  KnowledgeBase kb;
  ExpansionTrace trace;
};

// Grows the KB over unlabeled sentences until an iteration yields no new
// knowledge or max_iters is hit. The model is read-only throughout.
ExpansionResult expand(const Model &m, const KnowledgeBase &kb0,
                       const std::vector<Sentence> &unlabeled,
                       const ExpansionOptions &options = {},
                       const TypesByTag *types = nullptr);

// One JSON object per line.
void write_trace(std::ostream &out, const ExpansionTrace &trace);

}  // namespace kcrf

#endif  // KCRF_EXPANSION_HPP_
