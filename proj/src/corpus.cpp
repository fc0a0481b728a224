#include "kcrf/corpus.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "kcrf/error.hpp"

namespace kcrf {

TagSet::TagSet() : TagSet(std::vector<std::string>{"ENT", "O"}) {}

TagSet::TagSet(std::vector<std::string> tags) : tags_(std::move(tags)) {
  if (tags_.size() < 2) {
    throw ValidationError("tag set needs at least two tags");
  }
  std::set<std::string> seen;
  for (const auto &t : tags_) {
    if (t.empty() || t == "_") {
      throw ValidationError("invalid tag name '" + t + "'");
    }
    if (!seen.insert(t).second) {
      throw ValidationError("duplicate tag '" + t + "'");
    }
  }
}

int TagSet::index(std::string_view tag) const {
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    if (tags_[i] == tag) return static_cast<int>(i);
  }
  return -1;
}

void validate_sentence(const Sentence &s, const TagSet &tags) {
  const int n = static_cast<int>(s.size());
  for (int i = 0; i < n; ++i) {
    const Token &t = s.tokens[i];
    if (t.index != i + 1) {
      throw ValidationError("token indices must be 1..N contiguous");
    }
    if (t.form.empty() || t.pos.empty()) {
      throw ValidationError("token " + std::to_string(t.index) +
                            " has an empty form or POS tag");
    }
    if (t.pos.find_first_of("|]=") != std::string::npos) {
      throw ValidationError("token " + std::to_string(t.index) +
                            " has a POS tag containing '|', ']' or '='");
    }
  }
  for (const auto &arc : s.arcs) {
    if (arc.dep < 1 || arc.dep > n || arc.gov < 0 || arc.gov > n ||
        arc.gov == arc.dep) {
      throw ValidationError("arc " + std::to_string(arc.gov) + "->" +
                            std::to_string(arc.dep) + " out of range");
    }
    if (arc.type.empty() ||
        arc.type.find_first_of("|]=") != std::string::npos) {
      throw ValidationError("arc type '" + arc.type + "' is not allowed");
    }
  }
  if (s.labels) {
    if (static_cast<int>(s.labels->size()) != n) {
      throw ValidationError("label count differs from token count");
    }
    for (const auto &l : *s.labels) {
      if (!tags.contains(l)) throw ValidationError("unknown label '" + l + "'");
    }
  }
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

bool parse_int(std::string_view s, int *out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// POS tags and relation types become part of knowledge type names.
bool symbol_ok(std::string_view s) {
  return s.find_first_of("|]=") == std::string_view::npos;
}

[[noreturn]] void fail(int line, const std::string &msg) {
  throw ValidationError("line " + std::to_string(line) + ": " + msg);
}

struct PendingRow {
  int line;
  std::string label;
};

class CorpusReader {
 public:
  CorpusReader(const TagSet &tags, bool expect_labels)
      : tags_(tags), expect_labels_(expect_labels) {}

  void feed(std::string_view line, int line_no) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      finish();
      return;
    }
    if (line.front() == '#') return;

    auto fields = split_tabs(line);
    if (fields.size() != 6) {
      fail(line_no, "expected 6 tab-separated columns, found " +
                        std::to_string(fields.size()));
    }
    int index = 0;
    int head = 0;
    if (!parse_int(fields[0], &index)) fail(line_no, "bad INDEX");
    if (!parse_int(fields[3], &head)) fail(line_no, "bad HEAD");
    if (index != static_cast<int>(current_.tokens.size()) + 1) {
      fail(line_no, "token index " + std::to_string(index) +
                        " is not contiguous");
    }
    if (fields[1].empty()) fail(line_no, "empty FORM");
    if (fields[2].empty()) fail(line_no, "empty POS");
    if (fields[4].empty()) fail(line_no, "empty DEPREL");
    if (!symbol_ok(fields[2])) fail(line_no, "POS may not contain '|', ']' or '='");
    if (!symbol_ok(fields[4])) {
      fail(line_no, "DEPREL may not contain '|', ']' or '='");
    }
    if (head < 0) fail(line_no, "negative HEAD");
    if (head == index) fail(line_no, "token is its own head");

    current_.tokens.push_back(
        Token{index, std::string(fields[1]), std::string(fields[2])});
    current_.arcs.push_back(DependencyArc{std::string(fields[4]), head, index});
    rows_.push_back(PendingRow{line_no, std::string(fields[5])});
  }

  void finish() {
    if (current_.tokens.empty()) return;
    const int n = static_cast<int>(current_.tokens.size());
    for (std::size_t i = 0; i < current_.arcs.size(); ++i) {
      if (current_.arcs[i].gov > n) {
        fail(rows_[i].line, "HEAD " + std::to_string(current_.arcs[i].gov) +
                                " out of range for a " + std::to_string(n) +
                                "-token sentence");
      }
    }
    if (expect_labels_) {
      std::size_t unlabeled = 0;
      for (const auto &row : rows_) unlabeled += row.label == "_";
      if (unlabeled == 0) {
        std::vector<std::string> labels;
        for (const auto &row : rows_) {
          if (!tags_.contains(row.label)) {
            fail(row.line, "unknown label '" + row.label + "'");
          }
          labels.push_back(row.label);
        }
        current_.labels = std::move(labels);
      } else if (unlabeled != rows_.size()) {
        fail(rows_.front().line, "sentence mixes labeled and unlabeled rows");
      }
    }
    out_.push_back(std::move(current_));
    current_ = Sentence{};
    rows_.clear();
  }

  std::vector<Sentence> take() { return std::move(out_); }

 private:
  const TagSet &tags_;
  bool expect_labels_;
  Sentence current_;
  std::vector<PendingRow> rows_;
  std::vector<Sentence> out_;
};

}  // namespace

std::vector<Sentence> parse_corpus(std::istream &in, const TagSet &tags,
                                   bool expect_labels) {
  CorpusReader reader(tags, expect_labels);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) reader.feed(line, ++line_no);
  reader.finish();
  return reader.take();
}

std::vector<Sentence> parse_corpus(std::string_view text, const TagSet &tags,
                                   bool expect_labels) {
  std::istringstream in{std::string(text)};
  return parse_corpus(in, tags, expect_labels);
}

std::vector<Sentence> read_corpus_file(const std::string &path,
                                       const TagSet &tags, bool expect_labels) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file " + path);
  try {
    return parse_corpus(in, tags, expect_labels);
  } catch (const ValidationError &e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_corpus(std::ostream &out, const std::vector<Sentence> &corpus) {
  for (const auto &s : corpus) {
    const std::size_t n = s.size();
    std::vector<const DependencyArc *> head(n + 1, nullptr);
    for (const auto &arc : s.arcs) {
      if (arc.dep < 1 || arc.dep > static_cast<int>(n) || head[arc.dep]) {
        throw ValidationError(
            "cannot serialize sentence: each token needs exactly one head");
      }
      head[arc.dep] = &arc;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Token &t = s.tokens[i];
      const DependencyArc *arc = head[i + 1];
      if (!arc) {
        throw ValidationError("cannot serialize sentence: token " +
                              std::to_string(t.index) + " has no head");
      }
      out << t.index << '\t' << t.form << '\t' << t.pos << '\t' << arc->gov
          << '\t' << arc->type << '\t' << (s.labels ? (*s.labels)[i] : "_")
          << '\n';
    }
    out << '\n';
  }
}

std::string format_corpus(const std::vector<Sentence> &corpus) {
  std::ostringstream out;
  write_corpus(out, corpus);
  return out.str();
}

void write_corpus_file(const std::string &path,
                       const std::vector<Sentence> &corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus file " + path);
  write_corpus(out, corpus);
  if (!out) throw IoError("write failed for " + path);
}

std::string_view role_name(Role role) {
  return role == Role::kGov ? "GOV" : "DEP";
}

std::vector<DependencyView> dependency_view(const Sentence &s, int n) {
  if (n < 1 || n > static_cast<int>(s.size())) {
    throw ValidationError("position " + std::to_string(n) + " out of range");
  }
  std::vector<DependencyView> view;
  for (const auto &arc : s.arcs) {
    if (arc.gov == 0) continue;
    if (arc.gov == n) {
      const Token &other = s.token(arc.dep);
      view.push_back({Role::kGov, arc.type, other.form, other.pos});
    } else if (arc.dep == n) {
      const Token &other = s.token(arc.gov);
      view.push_back({Role::kDep, arc.type, other.form, other.pos});
    }
  }
  return view;
}

}  // namespace kcrf
