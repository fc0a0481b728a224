#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "kcrf/corpus.hpp"
#include "kcrf/error.hpp"
#include "oracles.hpp"

using namespace kcrf;

namespace {

const char *kStand =
    "# stand review\n"
    "1\tThis\tDT\t3\tdet\tO\n"
    "2\ttablet\tNN\t3\tcompound\tO\n"
    "3\tstand\tNN\t4\tnsubj\tO\n"
    "4\tworks\tVBZ\t0\troot\tO\n"
    "5\twith\tIN\t7\tcase\tO\n"
    "6\tmy\tPRP$\t7\tnmod:poss\tO\n"
    "7\tiPhone\tNNP\t4\tnmod:with\tENT\n"
    "\n";

std::string error_of(const std::string &text, bool labels = true) {
  try {
    parse_corpus(std::string_view(text), TagSet(), labels);
  } catch (const ValidationError &e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("tag set defaults and validation") {
  TagSet t;
  CHECK(t.size() == 2);
  CHECK(t.at(0) == "ENT");
  CHECK(t.index("O") == 1);
  CHECK(t.index("B-ENT") == -1);
  CHECK_THROWS_AS(TagSet({"ENT"}), ValidationError);
  CHECK_THROWS_AS(TagSet({"ENT", "ENT"}), ValidationError);
  CHECK_THROWS_AS(TagSet({"ENT", "_"}), ValidationError);
}

TEST_CASE("parse a labeled block") {
  auto c = parse_corpus(std::string_view(kStand), TagSet(), true);
  REQUIRE(c.size() == 1);
  const Sentence &s = c[0];
  CHECK(s.size() == 7);
  CHECK(s.token(7).form == "iPhone");
  CHECK(s.token(7).pos == "NNP");
  REQUIRE(s.labels);
  CHECK((*s.labels)[6] == "ENT");
  CHECK(s.arcs.size() == 7);
  CHECK(s.arcs[6] == DependencyArc{"nmod:with", 4, 7});
}

TEST_CASE("short block maps rows to tokens") {
  auto c = parse_corpus(std::string_view("1\tThis\tDT\t0\troot\tO\n"
                                         "2\ttablet\tNN\t1\tcompound\tO\n"
                                         "3\tworks\tVBZ\t1\tdep\tO\n"),
                        TagSet(), true);
  REQUIRE(c.size() == 1);
  CHECK(c[0].size() == 3);
}

TEST_CASE("labels are dropped unless expected") {
  auto c = parse_corpus(std::string_view(kStand), TagSet(), false);
  REQUIRE(c.size() == 1);
  CHECK_FALSE(c[0].labels);
}

TEST_CASE("underscore labels give an unlabeled sentence") {
  auto c = parse_corpus(std::string_view("1\tIt\tPRP\t0\troot\t_\n"),
                        TagSet(), true);
  REQUIRE(c.size() == 1);
  CHECK_FALSE(c[0].labels);
}

TEST_CASE("empty and comment-only streams") {
  CHECK(parse_corpus(std::string_view(""), TagSet(), true).empty());
  CHECK(parse_corpus(std::string_view("# nothing\n\n\n"), TagSet(), true)
            .empty());
}

TEST_CASE("parse errors name the line") {
  // HEAD 9 in a five token sentence: reported at the offending row.
  std::string bad =
      "1\ta\tDT\t2\tdet\tO\n"
      "2\tb\tNN\t0\troot\tO\n"
      "3\tc\tNN\t9\tdep\tO\n"
      "4\td\tNN\t2\tdep\tO\n"
      "5\te\tNN\t2\tdep\tO\n";
  CHECK(error_of(bad).find("line 3") != std::string::npos);

  CHECK(error_of("1\ta\tDT\t0\n").find("line 1") != std::string::npos);
  CHECK(error_of("1\ta\tDT\t0\troot\tO\n3\tb\tNN\t1\tdep\tO\n")
            .find("line 2") != std::string::npos);
  CHECK(error_of("1\ta\tDT\t0\troot\tPERSON\n").find("line 1") !=
        std::string::npos);
  CHECK(error_of("1\ta\tDT\t1\troot\tO\n").find("line 1") !=
        std::string::npos);
  CHECK(error_of("1\ta\tDT\tx\troot\tO\n").find("line 1") !=
        std::string::npos);
  // A sentence cannot mix labeled and unlabeled rows.
  CHECK_FALSE(error_of("1\ta\tDT\t0\troot\tO\n2\tb\tNN\t1\tdep\t_\n").empty());
  // Separators of the feature grammar are not allowed in POS or relation.
  CHECK_FALSE(error_of("1\ta\tD|T\t0\troot\tO\n").empty());
}

TEST_CASE("unknown labels are fine when labels are not expected") {
  auto c = parse_corpus(std::string_view("1\ta\tDT\t0\troot\tPERSON\n"),
                        TagSet(), false);
  CHECK(c.size() == 1);
}

TEST_CASE("missing file is an I/O error") {
  CHECK_THROWS_AS(read_corpus_file("/nonexistent/x.tsv", TagSet(), true),
                  IoError);
}

TEST_CASE("round trip is the identity") {
  auto c = parse_corpus(std::string_view(kStand), TagSet(), true);
  std::string text = format_corpus(c);
  CHECK(parse_corpus(std::string_view(text), TagSet(), true) == c);
  CHECK(format_corpus(parse_corpus(std::string_view(text), TagSet(), true)) ==
        text);

  // Random single-headed sentences, with and without labels.
  oracle::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Sentence> corpus;
    for (int i = 0; i < 4; ++i) {
      Sentence s = oracle::random_sentence(rng);
      s.arcs.resize(s.size());  // one head per token
      if (trial % 2) {
        std::vector<std::string> l;
        for (std::size_t n = 0; n < s.size(); ++n) l.push_back(n % 3 ? "O" : "ENT");
        s.labels = l;
      }
      corpus.push_back(s);
    }
    auto back = parse_corpus(std::string_view(format_corpus(corpus)), TagSet(),
                             true);
    CHECK(back == corpus);
  }
}

TEST_CASE("dependency view of the tablet stand review") {
  auto s = parse_corpus(std::string_view(kStand), TagSet(), true)[0];
  auto v = dependency_view(s, 7);
  // iPhone depends on works, and governs "with" and "my".
  REQUIRE(v.size() == 3);
  CHECK(std::count(v.begin(), v.end(),
                   DependencyView{Role::kDep, "nmod:with", "works", "VBZ"}) ==
        1);
  CHECK(std::count(v.begin(), v.end(),
                   DependencyView{Role::kGov, "nmod:poss", "my", "PRP$"}) ==
        1);

  // The root verb has no entry for its root arc.
  for (const auto &d : dependency_view(s, 4)) CHECK(d.role == Role::kGov);
  CHECK_THROWS_AS(dependency_view(s, 0), ValidationError);
  CHECK_THROWS_AS(dependency_view(s, 8), ValidationError);
}

TEST_CASE("dependency view: only the example arc") {
  Sentence s;
  for (int i = 1; i <= 7; ++i) s.tokens.push_back({i, "w", "NN"});
  s.tokens[3] = {4, "works", "VBZ"};
  s.tokens[6] = {7, "iPhone", "NNP"};
  s.arcs = {{"nmod:with", 4, 7}};
  CHECK(dependency_view(s, 7) ==
        std::vector<DependencyView>{{Role::kDep, "nmod:with", "works", "VBZ"}});
  CHECK(dependency_view(s, 2).empty());
}

TEST_CASE("token that governs and depends gets one entry per role") {
  Sentence s;
  s.tokens = {{1, "a", "DT"}, {2, "b", "NN"}, {3, "c", "VB"}};
  s.arcs = {{"det", 2, 1}, {"obj", 3, 2}, {"root", 0, 3}};
  auto v = dependency_view(s, 2);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == DependencyView{Role::kGov, "det", "a", "DT"});
  CHECK(v[1] == DependencyView{Role::kDep, "obj", "c", "VB"});
}

TEST_CASE("every arc shows up from both ends") {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Sentence s = oracle::random_sentence(rng);
    for (const auto &a : s.arcs) {
      if (a.gov == 0) continue;
      auto g = dependency_view(s, a.gov);
      auto d = dependency_view(s, a.dep);
      CHECK(std::count(g.begin(), g.end(),
                       DependencyView{Role::kGov, a.type,
                                      s.token(a.dep).form,
                                      s.token(a.dep).pos}) >= 1);
      CHECK(std::count(d.begin(), d.end(),
                       DependencyView{Role::kDep, a.type,
                                      s.token(a.gov).form,
                                      s.token(a.gov).pos}) >= 1);
    }
  }
}

TEST_CASE("validate_sentence") {
  auto s = parse_corpus(std::string_view(kStand), TagSet(), true)[0];
  CHECK_NOTHROW(validate_sentence(s, TagSet()));
  Sentence bad = s;
  bad.labels->pop_back();
  CHECK_THROWS_AS(validate_sentence(bad, TagSet()), ValidationError);
  bad = s;
  bad.arcs.push_back({"x", 2, 2});
  CHECK_THROWS_AS(validate_sentence(bad, TagSet()), ValidationError);
  bad = s;
  bad.tokens[2].index = 9;
  CHECK_THROWS_AS(validate_sentence(bad, TagSet()), ValidationError);
}
