#ifndef KCRF_EVAL_HPP_
#define KCRF_EVAL_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "kcrf/corpus.hpp"

namespace kcrf {

inline constexpr std::string_view kOutsideTag = "O";

// Inclusive 1-based token span.
struct Span {
  int start;
  int end;

  bool operator==(const Span &) const = default;
};

struct Mention {
  std::size_t sentence;
  Span span;

  bool operator==(const Mention &) const = default;
};

struct EvaluationReport {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const EvaluationReport &) const = default;
};

EvaluationReport make_report(long tp, long fp, long fn);

// kExact: predicted span equals a gold span.
// kContainment: predicted span lies inside a gold span.
enum class MatchMode { kExact, kContainment };

std::string_view match_mode_name(MatchMode m);
MatchMode parse_match_mode(std::string_view name);

// Maximal runs of non-outside tags. A tag starting with "B-" opens a new
// mention, so BIO sequences split where they should.
std::vector<Span> extract_mentions(const std::vector<std::string> &tags,
                                   const TagSet &tagset,
                                   std::string_view outside = kOutsideTag);

// Per sentence, predictions are matched greedily left to right against
// still-unmatched gold mentions; each gold mention is used at most once.
EvaluationReport score(const std::vector<std::vector<Span>> &gold,
                       const std::vector<std::vector<Span>> &pred,
                       MatchMode mode = MatchMode::kExact);

// Convenience: mentions from the labels of two parallel corpora.
EvaluationReport score_corpora(const std::vector<Sentence> &gold,
                               const std::vector<Sentence> &pred,
                               const TagSet &tags,
                               MatchMode mode = MatchMode::kExact);

}  // namespace kcrf

#endif  // KCRF_EVAL_HPP_
