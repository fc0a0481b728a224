#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "kcrf/error.hpp"
#include "kcrf/experiment.hpp"
#include "kcrf/synthetic.hpp"

using namespace kcrf;
namespace fs = std::filesystem;

namespace {

// Reported P/R/F1 on the seven review products, in kSystems order.
ResultTable reported_table() {
  const std::vector<std::pair<std::string, std::vector<double>>> rows = {
      {"Stylus", {.5, .54, .52, .75, .50, .60, .84, .64, .73, .66, .84, .74}},
      {"Micro SD Card",
       {.63, .51, .56, .89, .44, .59, .87, .57, .69, .77, .70, .74}},
      {"Mouse", {.54, .37, .44, .80, .48, .60, .75, .53, .62, .68, .68, .68}},
      {"Tablet Stand",
       {.58, .43, .49, .79, .40, .53, .85, .46, .60, .75, .65, .70}},
      {"Keyboard", {.54, .46, .5, .8, .42, .55, .8, .34, .48, .66, .72, .69}},
      {"Notebook Sleeve",
       {.69, .38, .49, .90, .23, .37, .91, .23, .37, .77, .63, .69}},
      {"Compact Flash",
       {.75, .61, .67, .92, .46, .62, .89, .51, .65, .82, .73, .77}},
  };
  ResultTable t;
  for (const auto &[name, v] : rows) {
    for (std::size_t s = 0; s < kSystems.size(); ++s) {
      EvaluationReport r;
      r.precision = v[3 * s];
      r.recall = v[3 * s + 1];
      r.f1 = v[3 * s + 2];
      t[name][kSystems[s]] = r;
    }
  }
  return t;
}

std::vector<std::string> reported_products() {
  return {"Stylus",   "Micro SD Card",   "Mouse",        "Tablet Stand",
          "Keyboard", "Notebook Sleeve", "Compact Flash"};
}

SyntheticCorpus small_corpus() {
  SyntheticConfig cfg;
  cfg.unlabeled_sentences = 600;
  cfg.test_sentences = 120;
  return generate_synthetic(7, cfg);
}

ExperimentData synthetic_data(const SyntheticCorpus &c) {
  ExperimentData d;
  d.train = c.train;
  ProductData all{"synthetic", c.test, c.unlabeled};
  ProductData subset{"expansion", {}, c.unlabeled};
  for (std::size_t i : c.expansion_test) subset.test.push_back(c.test[i]);
  ProductData dry{"no-unlabeled", c.test, {}};
  d.products = {all, subset, dry};
  return d;
}

void write_text(const fs::path &p, const std::string &text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("directional findings on the reported comparison") {
  ResultTable t = reported_table();
  auto products = reported_products();
  std::vector<std::string> first_four(products.begin(), products.begin() + 4);
  auto checks = check_directional_findings(t, products, first_four);
  REQUIRE(checks.size() == 7);
  for (const auto &c : checks) CHECK_MESSAGE(c.passed(), c.product);

  CHECK(t["Stylus"]["KCRF"].f1 > t["Stylus"]["CRF"].f1);
  CHECK(t["Stylus"]["KCRF"].recall > t["Stylus"]["CRF"].recall);
  CHECK(t["Compact Flash"]["KCRF"].f1 == 0.77);

  // Swap KCRF and CRF on one product and the check must notice.
  std::swap(t["Mouse"]["KCRF"], t["Mouse"]["CRF"]);
  auto bad = check_directional_findings(t, {"Mouse"}, first_four);
  CHECK_FALSE(bad[0].kcrf_recall_beats_crf);
  CHECK_FALSE(bad[0].passed());

  // Outside the DR products the CRF vs CRF(-)DR comparison is not required.
  ResultTable u = reported_table();
  std::swap(u["Keyboard"]["CRF"], u["Keyboard"]["CRF(-)DR"]);
  CHECK(check_directional_findings(u, {"Keyboard"}, first_four)[0].passed());
  CHECK_FALSE(
      check_directional_findings(u, {"Keyboard"}, {"Keyboard"})[0].passed());
}

TEST_CASE("synthetic experiment") {
  auto corpus = small_corpus();
  ExperimentSettings st;
  auto r = run_experiment(synthetic_data(corpus), st);
  REQUIRE(r.products ==
          std::vector<std::string>{"synthetic", "expansion", "no-unlabeled"});
  const auto &exact = r.tables.at(MatchMode::kExact);

  // Without unlabeled data expansion is the identity.
  CHECK(exact.at("no-unlabeled").at("KCRF") ==
        exact.at("no-unlabeled").at("CRF-Init"));
  CHECK(r.expanded_kb.at("no-unlabeled") == r.initial_kb);
  CHECK(r.tables.at(MatchMode::kContainment).at("no-unlabeled").at("KCRF") ==
        r.tables.at(MatchMode::kContainment).at("no-unlabeled").at("CRF-Init"));

  // Expansion-verb mentions are only recovered after expansion.
  CHECK(exact.at("expansion").at("KCRF").recall >
        exact.at("expansion").at("CRF-Init").recall);
  CHECK(exact.at("synthetic").at("KCRF").f1 >
        exact.at("synthetic").at("CRF-Init").f1);
  CHECK(r.expanded_kb.at("synthetic").size() > r.initial_kb.size());

  // Single-token mentions: both scoring modes agree here.
  CHECK(exact == r.tables.at(MatchMode::kContainment));

  auto table = format_table(r, MatchMode::kExact);
  for (const auto &s : kSystems) CHECK(table.find(s) != std::string::npos);
  CHECK(table.find("no-unlabeled") != std::string::npos);
  CHECK(table.find("scoring: exact") != std::string::npos);

  // Bit-reproducible.
  auto again = run_experiment(synthetic_data(corpus), st);
  CHECK(result_json(again) == result_json(r));
}

TEST_CASE("experiment input errors") {
  ExperimentSettings st;
  CHECK_THROWS_AS(run_experiment(ExperimentData{}, st), ValidationError);

  const fs::path dir = fs::temp_directory_path() / "kcrf_experiment_test";
  fs::remove_all(dir);
  fs::create_directories(dir / "data");
  auto corpus = small_corpus();
  write_corpus_file((dir / "data" / "train.tsv").string(),
                    {corpus.train.begin(), corpus.train.begin() + 5});
  write_corpus_file((dir / "data" / "test.tsv").string(),
                    {corpus.test.begin(), corpus.test.begin() + 3});

  write_text(dir / "data" / "ok.json",
             R"({"train": ["train.tsv"],
                 "products": [{"name": "P", "test": "test.tsv"}]})");
  auto d = load_experiment_file((dir / "data" / "ok.json").string(), TagSet());
  CHECK(d.train.size() == 5);
  REQUIRE(d.products.size() == 1);
  CHECK(d.products[0].name == "P");
  CHECK(d.products[0].test.size() == 3);
  CHECK(d.products[0].unlabeled.empty());

  CHECK_THROWS_AS(load_experiment_file((dir / "absent.json").string(), TagSet()),
                  IoError);
  write_text(dir / "data" / "bad.json", "{\"train\": [");
  CHECK_THROWS_AS(load_experiment_file((dir / "data" / "bad.json").string(), TagSet()),
                  ValidationError);
  write_text(dir / "data" / "noproducts.json", R"({"train": ["train.tsv"]})");
  CHECK_THROWS_AS(
      load_experiment_file((dir / "data" / "noproducts.json").string(), TagSet()),
      ValidationError);
  write_text(dir / "data" / "missing.json",
             R"({"train": ["nope.tsv"], "products": []})");
  CHECK_THROWS_AS(
      load_experiment_file((dir / "data" / "missing.json").string(), TagSet()),
      IoError);
  // Tags outside the configured set.
  CHECK_THROWS_AS(load_experiment_file((dir / "data" / "ok.json").string(),
                                       TagSet({"B", "O"})),
                  ValidationError);
  fs::remove_all(dir);
}
