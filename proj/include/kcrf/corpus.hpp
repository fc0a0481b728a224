#ifndef KCRF_CORPUS_HPP_
#define KCRF_CORPUS_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kcrf {

// Ordered set of output labels. The order is persisted with every model and
// drives all tie-breaking.
class TagSet {
 public:
  TagSet();  // {"ENT", "O"}
  explicit TagSet(std::vector<std::string> tags);

  std::size_t size() const { return tags_.size(); }
  const std::string &at(std::size_t i) const { return tags_.at(i); }
  const std::vector<std::string> &tags() const { return tags_; }

  // Index of `tag`, or -1 when it is not part of the set.
  int index(std::string_view tag) const;
  bool contains(std::string_view tag) const { return index(tag) >= 0; }

  bool operator==(const TagSet &other) const = default;

 private:
  std::vector<std::string> tags_;
};

struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string pos;

  bool operator==(const Token &) const = default;
};

// Typed relation between a governor and a dependent. gov == 0 is the
// artificial root.
struct DependencyArc {
  std::string type;
  int gov = 0;
  int dep = 0;

  bool operator==(const DependencyArc &) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<DependencyArc> arcs;
  std::optional<std::vector<std::string>> labels;

  std::size_t size() const { return tokens.size(); }
  const Token &token(int n) const { return tokens.at(n - 1); }

  bool operator==(const Sentence &) const = default;
};

// Checks the structural invariants of a sentence (contiguous indices, arcs in
// range, labels drawn from `tags`). Throws ValidationError.
void validate_sentence(const Sentence &s, const TagSet &tags);

// Reads the tab-separated corpus format:
//   INDEX FORM POS HEAD DEPREL LABEL
// one token per line, blank line between sentences, '#' comments.
// Labels are kept only when `expect_labels` is set and the column is not "_".
std::vector<Sentence> parse_corpus(std::istream &in, const TagSet &tags,
                                   bool expect_labels);
std::vector<Sentence> parse_corpus(std::string_view text, const TagSet &tags,
                                   bool expect_labels);
std::vector<Sentence> read_corpus_file(const std::string &path,
                                       const TagSet &tags, bool expect_labels);

// Each token must carry exactly one incoming arc (its head) to be written.
void write_corpus(std::ostream &out, const std::vector<Sentence> &corpus);
std::string format_corpus(const std::vector<Sentence> &corpus);
void write_corpus_file(const std::string &path,
                       const std::vector<Sentence> &corpus);

enum class Role { kGov, kDep };

std::string_view role_name(Role role);

// A dependency relation seen from one token: the token's role, the relation
// type and the word on the other end.
struct DependencyView {
  Role role;
  std::string type;
  std::string other_form;
  std::string other_pos;

  bool operator==(const DependencyView &) const = default;
};

// One entry per arc touching token n (1-based). Arcs to the root yield
// nothing since there is no other word.
std::vector<DependencyView> dependency_view(const Sentence &s, int n);

}  // namespace kcrf

#endif  // KCRF_CORPUS_HPP_
