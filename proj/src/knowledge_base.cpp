#include "kcrf/knowledge_base.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kcrf/error.hpp"

namespace kcrf {

namespace {

constexpr std::string_view kWordType = "[WORD]";

bool has_separator(std::string_view s) {
  return s.find('|') != std::string_view::npos ||
         s.find(']') != std::string_view::npos;
}

}  // namespace

KnowledgeType KnowledgeType::word() { return KnowledgeType(std::string(kWordType)); }

KnowledgeType KnowledgeType::dep_pattern(Role role, std::string_view type,
                                         std::string_view other_pos) {
  if (type.empty() || other_pos.empty() || has_separator(type) ||
      has_separator(other_pos)) {
    throw ValidationError("cannot build knowledge type from '" +
                          std::string(type) + "' / '" +
                          std::string(other_pos) + "'");
  }
  std::string s = "[";
  s += role_name(role);
  s += '|';
  s += type;
  s += '|';
  s += other_pos;
  s += ']';
  return KnowledgeType(std::move(s));
}

KnowledgeType KnowledgeType::parse(std::string_view canonical) {
  if (canonical == kWordType) return word();
  auto bad = [&]() {
    return ValidationError("malformed knowledge type '" +
                           std::string(canonical) + "'");
  };
  if (canonical.size() < 2 || canonical.front() != '[' ||
      canonical.back() != ']') {
    throw bad();
  }
  std::string_view body = canonical.substr(1, canonical.size() - 2);
  std::size_t a = body.find('|');
  std::size_t b = a == std::string_view::npos ? a : body.find('|', a + 1);
  if (b == std::string_view::npos ||
      body.find('|', b + 1) != std::string_view::npos) {
    throw bad();
  }
  std::string_view role = body.substr(0, a);
  Role r;
  if (role == "GOV") {
    r = Role::kGov;
  } else if (role == "DEP") {
    r = Role::kDep;
  } else {
    throw bad();
  }
  return dep_pattern(r, body.substr(a + 1, b - a - 1), body.substr(b + 1));
}

bool KnowledgeType::is_word() const { return canonical_ == kWordType; }

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool KnowledgeBase::add(const std::string &tag, const KnowledgeType &type,
                        std::string_view value) {
  if (tag.empty()) throw ValidationError("knowledge with empty tag");
  if (value.empty()) throw ValidationError("knowledge with empty value");
  return tags_[tag][type].insert(lowercase(value)).second;
}

std::size_t KnowledgeBase::merge(const KnowledgeBase &other) {
  std::size_t added = 0;
  for (const auto &[tag, types] : other.tags_) {
    for (const auto &[type, values] : types) {
      for (const auto &v : values) added += add(tag, type, v);
    }
  }
  return added;
}

bool KnowledgeBase::contains(const std::string &tag, const KnowledgeType &type,
                             std::string_view value) const {
  const ValueSet *vs = values(tag, type);
  return vs && vs->count(lowercase(value)) > 0;
}

const KnowledgeBase::ValueSet *KnowledgeBase::values(
    const std::string &tag, const KnowledgeType &type) const {
  auto t = tags_.find(tag);
  if (t == tags_.end()) return nullptr;
  auto k = t->second.find(type);
  return k == t->second.end() ? nullptr : &k->second;
}

std::set<KnowledgeType> KnowledgeBase::types(const std::string &tag) const {
  std::set<KnowledgeType> out;
  auto t = tags_.find(tag);
  if (t != tags_.end()) {
    for (const auto &[type, values] : t->second) out.insert(type);
  }
  return out;
}

std::vector<KnowledgeTriple> KnowledgeBase::triples() const {
  std::vector<KnowledgeTriple> out;
  for (const auto &[tag, types] : tags_) {
    for (const auto &[type, values] : types) {
      for (const auto &v : values) out.push_back({tag, type, v});
    }
  }
  return out;
}

std::size_t KnowledgeBase::size() const {
  std::size_t n = 0;
  for (const auto &[tag, types] : tags_) n += size(tag);
  return n;
}

std::size_t KnowledgeBase::size(const std::string &tag) const {
  auto t = tags_.find(tag);
  if (t == tags_.end()) return 0;
  std::size_t n = 0;
  for (const auto &[type, values] : t->second) n += values.size();
  return n;
}

bool KnowledgeBase::includes(const KnowledgeBase &other) const {
  for (const auto &[tag, types] : other.tags_) {
    for (const auto &[type, values] : types) {
      const ValueSet *mine = this->values(tag, type);
      if (!mine) return false;
      for (const auto &v : values) {
        if (!mine->count(v)) return false;
      }
    }
  }
  return true;
}

std::string kb_save(const KnowledgeBase &kb) {
  nlohmann::json tags = nlohmann::json::object();
  for (const auto &[tag, types] : kb.by_tag()) {
    nlohmann::json entry = nlohmann::json::object();
    for (const auto &[type, values] : types) {
      entry[type.str()] = std::vector<std::string>(values.begin(), values.end());
    }
    tags[tag] = std::move(entry);
  }
  nlohmann::json doc = {{"version", 1}, {"tags", std::move(tags)}};
  return doc.dump(2) + "\n";
}

KnowledgeBase kb_load(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ValidationError(std::string("knowledge base: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("version") ||
      doc["version"] != 1 || !doc.contains("tags") ||
      !doc["tags"].is_object()) {
    throw ValidationError(
        "knowledge base: expected {\"version\":1,\"tags\":{...}}");
  }
  KnowledgeBase kb;
  for (const auto &[tag, types] : doc["tags"].items()) {
    if (!types.is_object()) {
      throw ValidationError("knowledge base: tags/" + tag +
                            " must be an object");
    }
    for (const auto &[type, values] : types.items()) {
      const std::string where = "knowledge base: tags/" + tag + "/" + type;
      if (!values.is_array() || values.empty()) {
        throw ValidationError(where + " must be a non-empty array");
      }
      KnowledgeType k = KnowledgeType::parse(type);
      for (const auto &v : values) {
        if (!v.is_string() || v.get<std::string>().empty()) {
          throw ValidationError(where + " holds a non-string or empty value");
        }
        kb.add(tag, k, v.get<std::string>());
      }
    }
  }
  return kb;
}

void kb_save_file(const std::string &path, const KnowledgeBase &kb) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write knowledge base " + path);
  out << kb_save(kb);
  if (!out) throw IoError("write failed for " + path);
}

KnowledgeBase kb_load_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open knowledge base " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return kb_load(ss.str());
  } catch (const ValidationError &e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::vector<KnowledgeTriple> kb_diff(const KnowledgeBase &a,
                                     const KnowledgeBase &b) {
  std::vector<KnowledgeTriple> out;
  for (auto &t : b.triples()) {
    if (!a.contains(t.tag, t.type, t.value)) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace kcrf
