#include "kcrf/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "kcrf/error.hpp"

namespace kcrf {

std::vector<ReliablePrediction> reliable_positions(const Model &m,
                                                   const KnowledgeBase &kb,
                                                   const Sentence &s,
                                                   double delta_prime) {
  std::vector<ReliablePrediction> out;
  if (s.size() == 0) return out;
  MarginalTable table =
      forward_backward(m, vectorize(s, m.vocabulary(), m.features(), &kb));
  for (std::size_t n = 0; n < table.length(); ++n) {
    auto row = table.row(n);
    auto best = std::max_element(row.begin(), row.end());
    if (*best > delta_prime) {
      out.push_back({static_cast<int>(n + 1),
                     static_cast<int>(best - row.begin())});
    }
  }
  return out;
}

CandidateKB collect_candidates(const Sentence &s,
                               const std::vector<ReliablePrediction> &reliable,
                               const TypesByTag &types,
                               const KnowledgeBase &kb, const TagSet &tags) {
  CandidateKB out;
  for (const auto &r : reliable) {
    const std::string &tag = tags.at(r.tag);
    auto allowed = types.find(tag);
    if (allowed == types.end() || allowed->second.empty()) continue;
    for (const auto &p : extract_primitive(s, r.position)) {
      auto [type, value] = primitive_to_kv(p);
      if (!allowed->second.count(type)) continue;
      if (kb.contains(tag, type, value)) continue;
      out.add(tag, type, value);
    }
  }
  return out;
}

CandidateKB prune(const CandidateKB &candidates) {
  std::map<std::pair<KnowledgeType, std::string>, int> owners;
  for (const auto &t : candidates.triples()) ++owners[{t.type, t.value}];
  CandidateKB out;
  for (const auto &t : candidates.triples()) {
    if (owners[{t.type, t.value}] == 1) out.add(t);
  }
  return out;
}

TypesByTag types_of(const KnowledgeBase &kb) {
  TypesByTag out;
  for (const auto &[tag, types] : kb.by_tag()) out[tag] = kb.types(tag);
  return out;
}

namespace {

bool held_by_other_tag(const KnowledgeBase &kb, const KnowledgeTriple &t) {
  for (const auto &[tag, types] : kb.by_tag()) {
    if (tag != t.tag && kb.contains(tag, t.type, t.value)) return true;
  }
  return false;
}

}  // namespace

ExpansionResult expand(const Model &m, const KnowledgeBase &kb0,
                       const std::vector<Sentence> &unlabeled,
                       const ExpansionOptions &options,
                       const TypesByTag *types) {
  if (m.features().preset != Preset::kKnowledge) {
    throw ValidationError("expansion needs a model trained with the knowledge "
                          "preset");
  }
  if (options.max_iters < 1) throw ValidationError("max_iters must be >= 1");
  const TypesByTag harvest = types ? *types : types_of(kb0);
  const TagSet &tags = m.tags();

  ExpansionResult result{kb0, {}};
  KnowledgeBase &kb = result.kb;
  for (int iter = 1;; ++iter) {
    std::vector<std::size_t> reliable_count(tags.size(), 0);
    CandidateKB raw;
    for (const auto &s : unlabeled) {
      auto reliable = reliable_positions(m, kb, s, options.delta_prime);
      for (const auto &r : reliable) ++reliable_count[r.tag];
      raw.merge(collect_candidates(s, reliable, harvest, kb, tags));
    }
    CandidateKB kept = prune(raw);
    if (options.strict_prune) {
      CandidateKB strict;
      for (const auto &t : kept.triples()) {
        if (!held_by_other_tag(kb, t)) strict.add(t);
      }
      kept = std::move(strict);
    }
    kb.merge(kept);
    if (options.on_iteration) options.on_iteration(iter, raw, kept, kb);

    for (std::size_t t = 0; t < tags.size(); ++t) {
      const std::string &tag = tags.at(t);
      result.trace.records.push_back({iter, tag, reliable_count[t],
                                      raw.size(tag), kept.size(tag),
                                      kb.size(tag)});
    }
    result.trace.iterations = iter;
    if (kept.empty()) break;
    if (iter >= options.max_iters) {
      result.trace.reached_max_iters = true;
      break;
    }
  }
  return result;
}

void write_trace(std::ostream &out, const ExpansionTrace &trace) {
  for (const auto &r : trace.records) {
    nlohmann::json line = {{"iteration", r.iteration},
                           {"tag", r.tag},
                           {"reliable_count", r.reliable_count},
                           {"candidates_raw", r.candidates_raw},
                           {"candidates_pruned", r.candidates_pruned},
                           {"kb_size", r.kb_size}};
    out << line.dump() << "\n";
  }
  if (trace.reached_max_iters) {
    nlohmann::json warn = {{"warning", "max_iters reached"},
                           {"iterations", trace.iterations}};
    out << warn.dump() << "\n";
  }
}

}  // namespace kcrf
