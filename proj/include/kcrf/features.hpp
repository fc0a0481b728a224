#ifndef KCRF_FEATURES_HPP_
#define KCRF_FEATURES_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "kcrf/corpus.hpp"
#include "kcrf/knowledge_base.hpp"

namespace kcrf {

// ---------------------------------------------------------------------------
// Feature families
//
// basic:      word and POS window of +-4, digit count, slash/dash flag
// primitive:  current word plus one feature per dependency relation of the
//             token; the pool knowledge is mined from
// knowledge:  per (tag, knowledge type) indicators that fire when the token
//             exhibits a (type, value) pair present in the knowledge base
//
// Presets combine them: basic = {basic}, primitive = {basic, primitive},
// knowledge = {basic, knowledge}. The current-word primitive shares its
// string with the basic "W0=" feature, so it is one weight, not two.
// ---------------------------------------------------------------------------

enum class Preset { kBasic, kPrimitive, kKnowledge };

// Per-tag matching keeps the tag that owns a piece of knowledge in the
// feature name; flat matching only asks whether any tag knows it.
enum class KbMatch { kPerTag, kFlat };

struct FeatureConfig {
  Preset preset = Preset::kPrimitive;
  KbMatch kb_match = KbMatch::kPerTag;

  bool operator==(const FeatureConfig &) const = default;
};

std::string_view preset_name(Preset p);
Preset parse_preset(std::string_view name);
std::string_view kb_match_name(KbMatch m);
KbMatch parse_kb_match(std::string_view name);

inline constexpr int kWindow = 4;
inline constexpr std::string_view kBosMarker = "__BOS__";
inline constexpr std::string_view kEosMarker = "__EOS__";

struct WordAt {
  int offset;
  std::string form;  // lowercased, or a boundary marker
  bool operator==(const WordAt &) const = default;
};
struct PosAt {
  int offset;
  std::string pos;
  bool operator==(const PosAt &) const = default;
};
struct DigitCount {
  int count;
  bool operator==(const DigitCount &) const = default;
};
struct HasSlashOrDash {
  bool operator==(const HasSlashOrDash &) const = default;
};

using BasicFeature = std::variant<WordAt, PosAt, DigitCount, HasSlashOrDash>;

struct CurrentWord {
  std::string form;  // lowercased
  bool operator==(const CurrentWord &) const = default;
};
struct DependencyFeature {
  Role role;
  std::string type;
  std::string other_form;  // lowercased
  std::string other_pos;
  bool operator==(const DependencyFeature &) const = default;
};

using PrimitiveFeature = std::variant<CurrentWord, DependencyFeature>;

struct KnowledgeFeature {
  std::string tag;  // empty under flat matching
  KnowledgeType type;
  auto operator<=>(const KnowledgeFeature &) const = default;
};

// Canonical feature strings, e.g. "W[-2]=my", "P0=NNP", "DIGITS=2",
// "SLASHDASH", "PRIM:DEP|nmod:with|VBZ=works", "KB:ENT:[WORD]".
std::string feature_string(const BasicFeature &f);
std::string feature_string(const PrimitiveFeature &f);
std::string feature_string(const KnowledgeFeature &f);

// Recovers a primitive feature from its string; nullopt for other families.
std::optional<PrimitiveFeature> parse_primitive(std::string_view s);

// Positions are 1-based throughout.
std::vector<BasicFeature> extract_basic(const Sentence &s, int n);
std::vector<PrimitiveFeature> extract_primitive(const Sentence &s, int n);
std::pair<KnowledgeType, std::string> primitive_to_kv(
    const PrimitiveFeature &p);
// Sorted, without duplicates.
std::vector<KnowledgeFeature> knowledge_features(
    const Sentence &s, int n, const KnowledgeBase &kb,
    KbMatch match = KbMatch::kPerTag);

// Interns feature strings to dense ids 0..M-1. After freeze() unseen strings
// are reported absent and the vocabulary never grows.
class FeatureVocabulary {
 public:
  FeatureVocabulary() = default;
  explicit FeatureVocabulary(std::vector<std::string> names);  // frozen

  int add(const std::string &name);
  std::optional<int> lookup(std::string_view name) const;
  const std::string &name(int id) const { return names_.at(id); }
  const std::vector<std::string> &names() const { return names_; }
  std::size_t size() const { return names_.size(); }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  bool operator==(const FeatureVocabulary &other) const {
    return names_ == other.names_ && frozen_ == other.frozen_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> ids_;
  bool frozen_ = false;
};

// Active feature ids per position, each sorted and unique.
using FeatureVector = std::vector<int>;
using FeatureVectorSeq = std::vector<FeatureVector>;

// All feature strings of the configured families at position n. `kb` is
// consulted only by the knowledge preset; nullptr behaves like an empty KB.
std::vector<std::string> feature_strings(const Sentence &s, int n,
                                         const FeatureConfig &config,
                                         const KnowledgeBase *kb);

// Covers every string the configured extractors emit over `corpus`, plus the
// knowledge indicator of every (tag, type) key of `kb`. Returned frozen.
FeatureVocabulary build_vocabulary(const std::vector<Sentence> &corpus,
                                   const FeatureConfig &config,
                                   const KnowledgeBase *kb = nullptr);

// Maps each position through the frozen vocabulary; unknown strings drop out.
FeatureVectorSeq vectorize(const Sentence &s, const FeatureVocabulary &vocab,
                           const FeatureConfig &config,
                           const KnowledgeBase *kb = nullptr);

}  // namespace kcrf

#endif  // KCRF_FEATURES_HPP_
