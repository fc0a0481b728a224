#include "kcrf/features.hpp"

#include <algorithm>
#include <set>

#include "kcrf/error.hpp"

namespace kcrf {

namespace {

constexpr std::string_view kPrimPrefix = "PRIM:";
constexpr std::string_view kWordPrefix = "W0=";

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string offset_tag(char family, int offset) {
  if (offset == 0) return std::string(1, family) + "0";
  std::string s(1, family);
  s += '[';
  s += offset > 0 ? '+' : '-';
  s += std::to_string(offset > 0 ? offset : -offset);
  s += ']';
  return s;
}

void check_position(const Sentence &s, int n) {
  if (n < 1 || n > static_cast<int>(s.size())) {
    throw ValidationError("position " + std::to_string(n) + " out of range");
  }
}

}  // namespace

std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::kBasic:
      return "basic";
    case Preset::kPrimitive:
      return "primitive";
    case Preset::kKnowledge:
      return "knowledge";
  }
  return "?";
}

Preset parse_preset(std::string_view name) {
  if (name == "basic") return Preset::kBasic;
  if (name == "primitive") return Preset::kPrimitive;
  if (name == "knowledge") return Preset::kKnowledge;
  throw ValidationError("unknown feature preset '" + std::string(name) + "'");
}

std::string_view kb_match_name(KbMatch m) {
  return m == KbMatch::kPerTag ? "per-tag" : "flat";
}

KbMatch parse_kb_match(std::string_view name) {
  if (name == "per-tag") return KbMatch::kPerTag;
  if (name == "flat") return KbMatch::kFlat;
  throw ValidationError("unknown knowledge match mode '" + std::string(name) +
                        "'");
}

std::string feature_string(const BasicFeature &f) {
  return std::visit(
      Overloaded{
          [](const WordAt &w) { return offset_tag('W', w.offset) + "=" + w.form; },
          [](const PosAt &p) { return offset_tag('P', p.offset) + "=" + p.pos; },
          [](const DigitCount &d) {
            return "DIGITS=" + std::to_string(d.count);
          },
          [](const HasSlashOrDash &) { return std::string("SLASHDASH"); },
      },
      f);
}

std::string feature_string(const PrimitiveFeature &f) {
  return std::visit(
      Overloaded{
          [](const CurrentWord &w) { return std::string(kWordPrefix) + w.form; },
          [](const DependencyFeature &d) {
            std::string s(kPrimPrefix);
            s += role_name(d.role);
            s += '|';
            s += d.type;
            s += '|';
            s += d.other_pos;
            s += '=';
            s += d.other_form;
            return s;
          },
      },
      f);
}

std::string feature_string(const KnowledgeFeature &f) {
  if (f.tag.empty()) return "KB:" + f.type.str();
  return "KB:" + f.tag + ":" + f.type.str();
}

std::optional<PrimitiveFeature> parse_primitive(std::string_view s) {
  if (s.starts_with(kWordPrefix)) {
    if (s.size() == kWordPrefix.size()) return std::nullopt;
    return CurrentWord{std::string(s.substr(kWordPrefix.size()))};
  }
  if (!s.starts_with(kPrimPrefix)) return std::nullopt;
  s.remove_prefix(kPrimPrefix.size());
  std::size_t eq = s.find('=');
  if (eq == std::string_view::npos || eq + 1 == s.size()) return std::nullopt;
  std::string_view pattern = s.substr(0, eq);
  std::size_t a = pattern.find('|');
  std::size_t b = a == std::string_view::npos ? a : pattern.find('|', a + 1);
  if (b == std::string_view::npos) return std::nullopt;
  std::string_view role = pattern.substr(0, a);
  if (role != "GOV" && role != "DEP") return std::nullopt;
  return DependencyFeature{role == "GOV" ? Role::kGov : Role::kDep,
                           std::string(pattern.substr(a + 1, b - a - 1)),
                           std::string(s.substr(eq + 1)),
                           std::string(pattern.substr(b + 1))};
}

std::vector<BasicFeature> extract_basic(const Sentence &s, int n) {
  check_position(s, n);
  const int len = static_cast<int>(s.size());
  std::vector<BasicFeature> out;
  for (int off = -kWindow; off <= kWindow; ++off) {
    const int m = n + off;
    if (m < 1) {
      out.push_back(WordAt{off, std::string(kBosMarker)});
    } else if (m > len) {
      out.push_back(WordAt{off, std::string(kEosMarker)});
    } else {
      out.push_back(WordAt{off, lowercase(s.token(m).form)});
    }
  }
  for (int off = -kWindow; off <= kWindow; ++off) {
    const int m = n + off;
    if (m < 1) {
      out.push_back(PosAt{off, std::string(kBosMarker)});
    } else if (m > len) {
      out.push_back(PosAt{off, std::string(kEosMarker)});
    } else {
      out.push_back(PosAt{off, s.token(m).pos});
    }
  }
  const std::string &form = s.token(n).form;
  int digits = 0;
  bool slash_dash = false;
  for (char c : form) {
    if (c >= '0' && c <= '9') ++digits;
    if (c == '/' || c == '-') slash_dash = true;
  }
  out.push_back(DigitCount{digits});
  if (slash_dash) out.push_back(HasSlashOrDash{});
  return out;
}

std::vector<PrimitiveFeature> extract_primitive(const Sentence &s, int n) {
  check_position(s, n);
  std::vector<PrimitiveFeature> out;
  out.push_back(CurrentWord{lowercase(s.token(n).form)});
  for (auto &v : dependency_view(s, n)) {
    PrimitiveFeature f = DependencyFeature{v.role, std::move(v.type),
                                           lowercase(v.other_form),
                                           std::move(v.other_pos)};
    if (std::find(out.begin(), out.end(), f) == out.end()) {
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::pair<KnowledgeType, std::string> primitive_to_kv(
    const PrimitiveFeature &p) {
  return std::visit(
      Overloaded{
          [](const CurrentWord &w) {
            return std::pair{KnowledgeType::word(), lowercase(w.form)};
          },
          [](const DependencyFeature &d) {
            return std::pair{
                KnowledgeType::dep_pattern(d.role, d.type, d.other_pos),
                lowercase(d.other_form)};
          },
      },
      p);
}

std::vector<KnowledgeFeature> knowledge_features(const Sentence &s, int n,
                                                 const KnowledgeBase &kb,
                                                 KbMatch match) {
  std::set<KnowledgeFeature> out;
  if (kb.empty()) {
    check_position(s, n);
    return {};
  }
  for (const auto &p : extract_primitive(s, n)) {
    auto [type, value] = primitive_to_kv(p);
    for (const auto &[tag, types] : kb.by_tag()) {
      auto it = types.find(type);
      if (it == types.end() || !it->second.count(value)) continue;
      out.insert(KnowledgeFeature{match == KbMatch::kFlat ? "" : tag, type});
    }
  }
  return {out.begin(), out.end()};
}

FeatureVocabulary::FeatureVocabulary(std::vector<std::string> names) {
  for (auto &n : names) {
    if (!ids_.emplace(n, static_cast<int>(names_.size())).second) {
      throw ValidationError("duplicate feature '" + n + "' in vocabulary");
    }
    names_.push_back(std::move(n));
  }
  frozen_ = true;
}

int FeatureVocabulary::add(const std::string &name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  if (frozen_) throw ValidationError("vocabulary is frozen");
  const int id = static_cast<int>(names_.size());
  ids_.emplace(name, id);
  names_.push_back(name);
  return id;
}

std::optional<int> FeatureVocabulary::lookup(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> feature_strings(const Sentence &s, int n,
                                         const FeatureConfig &config,
                                         const KnowledgeBase *kb) {
  std::vector<std::string> out;
  for (const auto &f : extract_basic(s, n)) out.push_back(feature_string(f));
  if (config.preset == Preset::kPrimitive) {
    for (const auto &f : extract_primitive(s, n)) {
      out.push_back(feature_string(f));
    }
  } else if (config.preset == Preset::kKnowledge && kb) {
    for (const auto &f : knowledge_features(s, n, *kb, config.kb_match)) {
      out.push_back(feature_string(f));
    }
  }
  return out;
}

FeatureVocabulary build_vocabulary(const std::vector<Sentence> &corpus,
                                   const FeatureConfig &config,
                                   const KnowledgeBase *kb) {
  if (corpus.empty()) throw ValidationError("cannot build vocabulary: empty corpus");
  FeatureVocabulary vocab;
  for (const auto &s : corpus) {
    for (int n = 1; n <= static_cast<int>(s.size()); ++n) {
      for (const auto &f : feature_strings(s, n, config, kb)) vocab.add(f);
    }
  }
  if (config.preset == Preset::kKnowledge && kb) {
    for (const auto &[tag, types] : kb->by_tag()) {
      for (const auto &[type, values] : types) {
        vocab.add(feature_string(KnowledgeFeature{
            config.kb_match == KbMatch::kFlat ? "" : tag, type}));
      }
    }
  }
  vocab.freeze();
  return vocab;
}

FeatureVectorSeq vectorize(const Sentence &s, const FeatureVocabulary &vocab,
                           const FeatureConfig &config,
                           const KnowledgeBase *kb) {
  if (!vocab.frozen()) throw ValidationError("vectorize needs a frozen vocabulary");
  FeatureVectorSeq seq(s.size());
  for (int n = 1; n <= static_cast<int>(s.size()); ++n) {
    FeatureVector &ids = seq[n - 1];
    for (const auto &f : feature_strings(s, n, config, kb)) {
      if (auto id = vocab.lookup(f)) ids.push_back(*id);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  return seq;
}

}  // namespace kcrf
