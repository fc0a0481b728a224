#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kcrf/crf.hpp"
#include "kcrf/error.hpp"
#include "kcrf/pipeline.hpp"

using namespace kcrf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string &name) {
  fs::path d = fs::temp_directory_path() / ("kcrf_pipeline_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

PipelineConfig config_for(const fs::path &dir) {
  PipelineConfig c;
  c.out_dir = dir.string();
  c.seed = 7;
  return c;
}

// synth, then pretrain through eval with default artifact names.
void run_all(const PipelineConfig &base) {
  std::ostringstream log;
  const fs::path dir = base.out_dir;
  cmd_synth(base, log);
  PipelineConfig c = base;
  c.train = (dir / "train.tsv").string();
  c.unlabeled = (dir / "unlabeled.tsv").string();
  c.test = (dir / "test.tsv").string();
  for (Stage s : {Stage::kPretrain, Stage::kSelect, Stage::kTrain,
                  Stage::kExpand, Stage::kPredict, Stage::kEval}) {
    run_stage(s, c, log);
  }
}

int run_cli(const std::string &args) {
  std::string cmd = std::string(KCRF_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("pipeline artifacts are byte-identical across reruns") {
  fs::path a = fresh_dir("a"), b = fresh_dir("b");
  run_all(config_for(a));

  // The expand stage must leave the model it reads untouched.
  const std::string model = slurp(a / artifact::kKcrfModel);
  run_all(config_for(b));
  CHECK(slurp(a / artifact::kKcrfModel) == model);

  for (const char *name :
       {artifact::kCrfModel, artifact::kInitialKb, artifact::kSelection,
        artifact::kKcrfModel, artifact::kExpandedKb, artifact::kTrace,
        artifact::kPredictions, artifact::kReport, "train.tsv",
        "unlabeled.tsv", "test.tsv"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  fs::remove_all(b);

  SUBCASE("expanded and initial predictions differ only where the KB does") {
    PipelineConfig c = config_for(a);
    c.test = (a / "test.tsv").string();
    c.kb = (a / artifact::kInitialKb).string();
    c.output = (a / "init.tsv").string();
    std::ostringstream log;
    cmd_predict(c, log);

    TagSet tags;
    auto test = read_corpus_file(c.test, tags, true);
    auto init = read_corpus_file(c.output, tags, true);
    auto grown =
        read_corpus_file((a / artifact::kPredictions).string(), tags, true);
    Model m = load_model_file((a / artifact::kKcrfModel).string());
    KnowledgeBase kb0 = kb_load_file((a / artifact::kInitialKb).string());
    KnowledgeBase kb1 = kb_load_file((a / artifact::kExpandedKb).string());
    int changed = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
      auto x0 = vectorize(test[i], m.vocabulary(), m.features(), &kb0);
      auto x1 = vectorize(test[i], m.vocabulary(), m.features(), &kb1);
      if (x0 == x1) CHECK(init[i].labels == grown[i].labels);
      changed += init[i].labels != grown[i].labels;
    }
    CHECK(changed > 0);
  }
  fs::remove_all(a);
}

TEST_CASE("knowledge model on an empty KB predicts like the basic model") {
  fs::path d = fresh_dir("empty_kb");
  std::ostringstream log;
  PipelineConfig c = config_for(d);
  cmd_synth(c, log);
  c.train = (d / "train.tsv").string();
  c.test = (d / "test.tsv").string();

  // delta = 0 admits nothing.
  c.delta = 0.0;
  cmd_pretrain(c, log);
  cmd_select(c, log);
  REQUIRE(kb_load_file((d / artifact::kInitialKb).string()).empty());
  cmd_train(c, log);
  c.kb = (d / artifact::kInitialKb).string();
  c.output = (d / "kcrf.tsv").string();
  cmd_predict(c, log);

  PipelineConfig basic = c;
  basic.preset = Preset::kBasic;
  basic.output = (d / "basic.model.json").string();
  cmd_pretrain(basic, log);
  basic.model = basic.output;
  basic.output = (d / "basic.tsv").string();
  cmd_predict(basic, log);
  CHECK(slurp(d / "kcrf.tsv") == slurp(d / "basic.tsv"));

  // Zero-length input, zero-length output.
  std::ofstream(d / "empty.tsv").close();
  PipelineConfig empty = c;
  empty.test = (d / "empty.tsv").string();
  empty.output = (d / "empty.out.tsv").string();
  cmd_predict(empty, log);
  CHECK(fs::file_size(d / "empty.out.tsv") == 0);
  fs::remove_all(d);
}

TEST_CASE("configuration checks") {
  fs::path d = fresh_dir("config");
  PipelineConfig c = config_for(d);
  CHECK_THROWS_AS(check_config(Stage::kPretrain, c), ValidationError);
  c.train = (d / "absent.tsv").string();
  CHECK_THROWS_AS(check_config(Stage::kPretrain, c), IoError);

  std::ostringstream log;
  cmd_synth(c, log);
  c.train = (d / "train.tsv").string();
  CHECK_NOTHROW(check_config(Stage::kPretrain, c));
  for (auto bad : {-0.1, std::nan("")}) {
    PipelineConfig b = c;
    b.delta = bad;
    CHECK_THROWS_AS(check_config(Stage::kPretrain, b), ValidationError);
  }
  PipelineConfig b = c;
  b.delta_prime = 1.5;
  CHECK_THROWS_AS(check_config(Stage::kExpand, b), ValidationError);
  b = c;
  b.sigma2 = 0.0;
  CHECK_THROWS_AS(check_config(Stage::kPretrain, b), ValidationError);
  b = c;
  b.tags = {"ENT", "OTHER"};
  CHECK_THROWS_AS(check_config(Stage::kPretrain, b), ValidationError);
  b = c;
  b.preset = Preset::kKnowledge;
  CHECK_THROWS_AS(check_config(Stage::kPretrain, b), ValidationError);

  // predict needs an expanded KB for a knowledge model.
  cmd_pretrain(c, log);
  cmd_select(c, log);
  cmd_train(c, log);
  b = c;
  b.test = (d / "test.tsv").string();
  CHECK_THROWS_AS(cmd_predict(b, log), IoError);
  fs::remove_all(d);
}

TEST_CASE("command line exit codes and config files") {
  fs::path d = fresh_dir("cli");
  const std::string dir = " --out-dir " + d.string();
  CHECK(run_cli("") == 1);
  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("pretrain --train " + (d / "absent.tsv").string() + dir) == 2);
  CHECK(run_cli("synth --seed 7" + dir) == 0);
  const std::string train = " --train " + (d / "train.tsv").string();
  CHECK(run_cli("pretrain --delta -1" + train + dir) == 1);
  CHECK(run_cli("pretrain --mode fuzzy" + train + dir) == 1);
  CHECK(run_cli("select --config " + (d / "absent.toml").string() + dir) == 2);
  CHECK(run_cli("pretrain" + train + dir) == 0);

  // A config file sets delta = 0; the command line can override it.
  std::ofstream(d / "run.toml") << "delta = 0.0\n";
  const std::string cfg = " --config " + (d / "run.toml").string();
  CHECK(run_cli("select" + cfg + dir) == 0);
  CHECK(kb_load_file((d / artifact::kInitialKb).string()).empty());
  CHECK(run_cli("select --delta 0.3" + cfg + dir) == 0);
  CHECK_FALSE(kb_load_file((d / artifact::kInitialKb).string()).empty());

  // Corrupt model: a validation failure.
  std::ofstream(d / "junk.json") << "{\"not\": \"a model\"}";
  CHECK(run_cli("select --model " + (d / "junk.json").string() + dir) == 1);
  fs::remove_all(d);
}
