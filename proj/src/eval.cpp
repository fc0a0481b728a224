#include "kcrf/eval.hpp"

#include <algorithm>

#include "kcrf/error.hpp"

namespace kcrf {

EvaluationReport make_report(long tp, long fp, long fn) {
  EvaluationReport r{tp, fp, fn, 0.0, 0.0, 0.0};
  if (tp + fp > 0) r.precision = static_cast<double>(tp) / (tp + fp);
  if (tp + fn > 0) r.recall = static_cast<double>(tp) / (tp + fn);
  if (r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

std::string_view match_mode_name(MatchMode m) {
  return m == MatchMode::kExact ? "exact" : "containment";
}

MatchMode parse_match_mode(std::string_view name) {
  if (name == "exact") return MatchMode::kExact;
  if (name == "containment") return MatchMode::kContainment;
  throw ValidationError("unknown scoring mode '" + std::string(name) + "'");
}

std::vector<Span> extract_mentions(const std::vector<std::string> &tags,
                                   const TagSet &tagset,
                                   std::string_view outside) {
  std::vector<Span> out;
  bool open = false;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string &t = tags[i];
    if (!tagset.contains(t)) throw ValidationError("unknown tag '" + t + "'");
    const int pos = static_cast<int>(i + 1);
    if (t == outside) {
      open = false;
    } else if (open && !t.starts_with("B-")) {
      out.back().end = pos;
    } else {
      out.push_back({pos, pos});
      open = true;
    }
  }
  return out;
}

namespace {

void check_side(const std::vector<Span> &spans, const char *side) {
  std::vector<Span> sorted = spans;
  std::sort(sorted.begin(), sorted.end(),
            [](const Span &a, const Span &b) { return a.start < b.start; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].start < 1 || sorted[i].end < sorted[i].start) {
      throw ValidationError(std::string("malformed ") + side + " span");
    }
    if (i > 0 && sorted[i].start <= sorted[i - 1].end) {
      throw ValidationError(std::string("overlapping ") + side + " spans");
    }
  }
}

bool matches(const Span &pred, const Span &gold, MatchMode mode) {
  if (mode == MatchMode::kExact) return pred == gold;
  return pred.start >= gold.start && pred.end <= gold.end;
}

}  // namespace

EvaluationReport score(const std::vector<std::vector<Span>> &gold,
                       const std::vector<std::vector<Span>> &pred,
                       MatchMode mode) {
  if (gold.size() != pred.size()) {
    throw ValidationError("gold and predicted sentence counts differ");
  }
  long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    check_side(gold[i], "gold");
    check_side(pred[i], "predicted");
    std::vector<bool> used(gold[i].size(), false);
    for (const Span &p : pred[i]) {
      bool hit = false;
      for (std::size_t g = 0; g < gold[i].size(); ++g) {
        if (!used[g] && matches(p, gold[i][g], mode)) {
          used[g] = true;
          hit = true;
          break;
        }
      }
      hit ? ++tp : ++fp;
    }
    fn += std::count(used.begin(), used.end(), false);
  }
  return make_report(tp, fp, fn);
}

EvaluationReport score_corpora(const std::vector<Sentence> &gold,
                               const std::vector<Sentence> &pred,
                               const TagSet &tags, MatchMode mode) {
  if (gold.size() != pred.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) +
                          " sentences, predictions have " +
                          std::to_string(pred.size()));
  }
  std::vector<std::vector<Span>> g, p;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i].labels || !pred[i].labels) {
      throw ValidationError("sentence " + std::to_string(i + 1) +
                            " is missing labels");
    }
    if (gold[i].size() != pred[i].size()) {
      throw ValidationError("sentence " + std::to_string(i + 1) +
                            " differs in length between gold and predictions");
    }
    g.push_back(extract_mentions(*gold[i].labels, tags));
    p.push_back(extract_mentions(*pred[i].labels, tags));
  }
  return score(g, p, mode);
}

}  // namespace kcrf
