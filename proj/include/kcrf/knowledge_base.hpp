#ifndef KCRF_KNOWLEDGE_BASE_HPP_
#define KCRF_KNOWLEDGE_BASE_HPP_

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kcrf/corpus.hpp"

namespace kcrf {

// Generalized pattern of a primitive feature: "[WORD]" for the current word,
// "[ROLE|type|other_pos]" for a dependency feature.
class KnowledgeType {
 public:
  static KnowledgeType word();
  static KnowledgeType dep_pattern(Role role, std::string_view type,
                                   std::string_view other_pos);
  // Inverse of str(). Throws ValidationError on malformed input.
  static KnowledgeType parse(std::string_view canonical);

  const std::string &str() const { return canonical_; }
  bool is_word() const;

  auto operator<=>(const KnowledgeType &) const = default;

 private:
  explicit KnowledgeType(std::string canonical)
      : canonical_(std::move(canonical)) {}

  std::string canonical_;
};

struct KnowledgeTriple {
  std::string tag;
  KnowledgeType type;
  std::string value;

  auto operator<=>(const KnowledgeTriple &) const = default;
};

// Lowercases ASCII letters; other bytes pass through.
std::string lowercase(std::string_view s);

// Per-tag map from knowledge type to a set of lowercased values. A type key is
// present only when it holds at least one value.
class KnowledgeBase {
 public:
  using ValueSet = std::set<std::string>;
  using TypeMap = std::map<KnowledgeType, ValueSet>;

  // Returns true when the triple was not present before.
  bool add(const std::string &tag, const KnowledgeType &type,
           std::string_view value);
  bool add(const KnowledgeTriple &t) { return add(t.tag, t.type, t.value); }
  // Adds every triple of `other`; returns the number of new triples.
  std::size_t merge(const KnowledgeBase &other);

  bool contains(const std::string &tag, const KnowledgeType &type,
                std::string_view value) const;
  const ValueSet *values(const std::string &tag,
                         const KnowledgeType &type) const;
  // Types present under `tag` (empty when the tag has no knowledge).
  std::set<KnowledgeType> types(const std::string &tag) const;

  const std::map<std::string, TypeMap> &by_tag() const { return tags_; }
  std::vector<KnowledgeTriple> triples() const;
  std::size_t size() const;
  std::size_t size(const std::string &tag) const;
  bool empty() const { return tags_.empty(); }
  // True when every triple of `other` is also in this KB.
  bool includes(const KnowledgeBase &other) const;

  bool operator==(const KnowledgeBase &) const = default;

 private:
  std::map<std::string, TypeMap> tags_;
};

// Canonical JSON document (sorted tags, types and values). Equal KBs always
// serialize to identical bytes.
std::string kb_save(const KnowledgeBase &kb);
KnowledgeBase kb_load(std::string_view json_text);
void kb_save_file(const std::string &path, const KnowledgeBase &kb);
KnowledgeBase kb_load_file(const std::string &path);

// Triples of `b` that are not in `a`, sorted.
std::vector<KnowledgeTriple> kb_diff(const KnowledgeBase &a,
                                     const KnowledgeBase &b);

}  // namespace kcrf

#endif  // KCRF_KNOWLEDGE_BASE_HPP_
