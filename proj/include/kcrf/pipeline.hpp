#ifndef KCRF_PIPELINE_HPP_
#define KCRF_PIPELINE_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kcrf/eval.hpp"
#include "kcrf/expansion.hpp"
#include "kcrf/features.hpp"
#include "kcrf/knowledge.hpp"

namespace kcrf {

// Stage-separated pipeline. Every stage reads and writes named artifacts in
// `out_dir` unless a path is given explicitly:
//
//   pretrain  train            -> crf.model.json
//   select    crf.model.json   -> kb.initial.json, selection.txt
//   train     train, kb.initial.json -> kcrf.model.json
//   expand    kcrf.model.json, kb.initial.json, unlabeled
//                              -> kb.expanded.json, trace.jsonl
//   predict   model (+ kb), test -> predictions.tsv
//   eval      test, predictions.tsv -> report.json
//
// `model` and `kb` override the stage's input model and KB, `output` its
// primary output. CRF-Init and KCRF differ only in the --kb given to predict.
struct PipelineConfig {
  std::string train;
  std::string test;
  std::string unlabeled;
  std::string model;
  std::string kb;
  std::string predictions;
  std::string output;
  std::string trace;
  std::string report;
  std::string experiment;
  std::string out_dir = ".";

  double delta = kDefaultDelta;
  double delta_prime = kDefaultDeltaPrime;
  double sigma2 = 1.0;
  int max_iters = kDefaultMaxIters;
  Preset preset = Preset::kPrimitive;  // pretrain only
  KbMatch kb_match = KbMatch::kPerTag;
  bool strict_prune = false;
  std::vector<std::string> tags = {"ENT", "O"};
  MatchMode mode = MatchMode::kExact;
  std::uint64_t seed = 1;
};

enum class Stage {
  kPretrain,
  kSelect,
  kTrain,
  kExpand,
  kPredict,
  kEval,
  kExperiment,
  kSynth
};

std::string_view stage_name(Stage s);

// Artifact names used when no explicit path is given.
namespace artifact {
inline constexpr const char *kCrfModel = "crf.model.json";
inline constexpr const char *kInitialKb = "kb.initial.json";
inline constexpr const char *kSelection = "selection.txt";
inline constexpr const char *kKcrfModel = "kcrf.model.json";
inline constexpr const char *kExpandedKb = "kb.expanded.json";
inline constexpr const char *kTrace = "trace.jsonl";
inline constexpr const char *kPredictions = "predictions.tsv";
inline constexpr const char *kReport = "report.json";
inline constexpr const char *kResults = "results.json";
inline constexpr const char *kTables = "results.txt";
}  // namespace artifact

// Concrete input and output paths of one stage.
struct StagePaths {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

StagePaths stage_paths(Stage stage, const PipelineConfig &config);

// Threshold ranges, tag set sanity, existence of every input and creatability
// of every output directory. ValidationError or IoError.
void check_config(Stage stage, const PipelineConfig &config);

// Each command checks its configuration first, logs one short summary per
// artifact to `log` and returns the path of its primary artifact.
std::string cmd_pretrain(const PipelineConfig &config, std::ostream &log);
std::string cmd_select(const PipelineConfig &config, std::ostream &log);
std::string cmd_train(const PipelineConfig &config, std::ostream &log);
std::string cmd_expand(const PipelineConfig &config, std::ostream &log);
std::string cmd_predict(const PipelineConfig &config, std::ostream &log);
std::string cmd_eval(const PipelineConfig &config, std::ostream &log);
std::string cmd_experiment(const PipelineConfig &config, std::ostream &log);
std::string cmd_synth(const PipelineConfig &config, std::ostream &log);

std::string run_stage(Stage stage, const PipelineConfig &config,
                      std::ostream &log);

}  // namespace kcrf

#endif  // KCRF_PIPELINE_HPP_
