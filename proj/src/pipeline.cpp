#include "kcrf/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "kcrf/corpus.hpp"
#include "kcrf/crf.hpp"
#include "kcrf/error.hpp"
#include "kcrf/experiment.hpp"
#include "kcrf/knowledge_base.hpp"
#include "kcrf/synthetic.hpp"

namespace kcrf {

namespace fs = std::filesystem;

namespace {

std::string in_dir(const PipelineConfig &c, const std::string &explicit_path,
                   const char *name) {
  if (!explicit_path.empty()) return explicit_path;
  return (fs::path(c.out_dir) / name).string();
}

const std::string &require(const std::string &path, const char *flag) {
  if (path.empty()) {
    throw ValidationError(std::string("missing required path --") + flag);
  }
  return path;
}

// Input of predict: the test file, or the unlabeled file when no test file
// is configured.
const std::string &predict_input(const PipelineConfig &c) {
  if (!c.test.empty()) return c.test;
  return require(c.unlabeled, "test");
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

void check_kb_tags(const KnowledgeBase &kb, const TagSet &tags,
                   const std::string &what) {
  for (const auto &[tag, unused] : kb.by_tag()) {
    if (!tags.contains(tag)) {
      throw ValidationError(what + " has tag '" + tag +
                            "' which is not in the tag set");
    }
  }
}

void check_model_tags(const Model &m, const PipelineConfig &c) {
  if (m.tags().tags() != c.tags) {
    throw ValidationError("model tag set does not match the configured tags");
  }
}

Model fit(const std::vector<Sentence> &corpus, const PipelineConfig &c,
          Preset preset, const KnowledgeBase *kb) {
  FeatureConfig fc{preset, c.kb_match};
  TagSet tags(c.tags);
  FeatureVocabulary vocab = build_vocabulary(corpus, fc, kb);
  auto seqs = make_sequences(corpus, vocab, fc, tags, kb);
  TrainConfig tc;
  tc.sigma2 = c.sigma2;
  return train(seqs, std::move(tags), std::move(vocab), fc, tc);
}

void log_training(std::ostream &log, const Model &m) {
  const TrainingInfo &t = m.training();
  log << "trained " << preset_name(m.features().preset) << " model: "
      << m.num_features() << " features, " << t.iterations
      << " iterations, objective " << t.final_objective << " ("
      << t.termination << ")\n";
}

}  // namespace

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::kPretrain: return "pretrain";
    case Stage::kSelect: return "select";
    case Stage::kTrain: return "train";
    case Stage::kExpand: return "expand";
    case Stage::kPredict: return "predict";
    case Stage::kEval: return "eval";
    case Stage::kExperiment: return "experiment";
    case Stage::kSynth: return "synth";
  }
  return "?";
}

StagePaths stage_paths(Stage stage, const PipelineConfig &c) {
  using namespace artifact;
  StagePaths p;
  switch (stage) {
    case Stage::kPretrain:
      p.inputs = {require(c.train, "train")};
      p.outputs = {in_dir(c, c.output, kCrfModel)};
      break;
    case Stage::kSelect:
      p.inputs = {in_dir(c, c.model, kCrfModel)};
      if (!c.train.empty()) p.inputs.push_back(c.train);
      p.outputs = {in_dir(c, c.output, kInitialKb),
                   in_dir(c, c.report, kSelection)};
      break;
    case Stage::kTrain:
      p.inputs = {require(c.train, "train"), in_dir(c, c.kb, kInitialKb)};
      p.outputs = {in_dir(c, c.output, kKcrfModel)};
      break;
    case Stage::kExpand:
      p.inputs = {in_dir(c, c.model, kKcrfModel), in_dir(c, c.kb, kInitialKb),
                  require(c.unlabeled, "unlabeled")};
      p.outputs = {in_dir(c, c.output, kExpandedKb),
                   in_dir(c, c.trace, kTrace)};
      break;
    case Stage::kPredict:
      // The KB is only needed for knowledge-preset models, which is known
      // once the model is loaded.
      p.inputs = {in_dir(c, c.model, kKcrfModel), predict_input(c)};
      if (!c.kb.empty()) p.inputs.push_back(c.kb);
      p.outputs = {in_dir(c, c.output, kPredictions)};
      break;
    case Stage::kEval:
      p.inputs = {require(c.test, "test"),
                  in_dir(c, c.predictions, kPredictions)};
      p.outputs = {in_dir(c, c.output, kReport)};
      break;
    case Stage::kExperiment:
      p.inputs = {require(c.experiment, "experiment")};
      p.outputs = {in_dir(c, c.output, kResults), in_dir(c, "", kTables)};
      break;
    case Stage::kSynth:
      for (const char *name : {"train.tsv", "unlabeled.tsv", "test.tsv",
                               "test_expansion.tsv", "experiment.json"}) {
        p.outputs.push_back((fs::path(c.out_dir) / name).string());
      }
      break;
  }
  return p;
}

void check_config(Stage stage, const PipelineConfig &c) {
  if (!std::isfinite(c.delta) || c.delta < 0.0) {
    throw ValidationError("--delta must be a finite value >= 0");
  }
  if (!(c.delta_prime >= 0.0 && c.delta_prime <= 1.0)) {
    throw ValidationError("--delta-prime must lie in [0, 1]");
  }
  if (!std::isfinite(c.sigma2) || c.sigma2 <= 0.0) {
    throw ValidationError("--sigma2 must be positive");
  }
  if (c.max_iters < 1) throw ValidationError("--max-iters must be >= 1");
  TagSet tags(c.tags);
  if (!tags.contains("O")) {
    throw ValidationError("tag set must contain the outside tag O");
  }
  if (stage == Stage::kPretrain && c.preset == Preset::kKnowledge) {
    throw ValidationError(
        "pretrain takes the basic or primitive preset; knowledge models are "
        "built by train");
  }

  const StagePaths p = stage_paths(stage, c);
  for (const auto &in : p.inputs) {
    std::error_code ec;
    if (!fs::is_regular_file(in, ec)) throw IoError("no such file: " + in);
  }
  for (const auto &out : p.outputs) {
    fs::path dir = fs::path(out).parent_path();
    if (dir.empty()) continue;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
      throw IoError("cannot create output directory " + dir.string());
    }
  }
}

std::string cmd_pretrain(const PipelineConfig &c, std::ostream &log) {
  check_config(Stage::kPretrain, c);
  const StagePaths p = stage_paths(Stage::kPretrain, c);
  auto corpus = read_corpus_file(c.train, TagSet(c.tags), true);
  Model m = fit(corpus, c, c.preset, nullptr);
  log_training(log, m);
  save_model_file(p.outputs[0], m);
  log << "wrote " << p.outputs[0] << "\n";
  return p.outputs[0];
}

std::string cmd_select(const PipelineConfig &c, std::ostream &log) {
  check_config(Stage::kSelect, c);
  const StagePaths p = stage_paths(Stage::kSelect, c);
  Model m = load_model_file(p.inputs[0]);
  check_model_tags(m, c);
  std::vector<Sentence> witness;
  if (!c.train.empty()) witness = read_corpus_file(c.train, m.tags(), true);

  KnowledgeSelection sel = select_knowledge_types(m, c.delta);
  KnowledgeBase kb =
      build_initial_kb(sel, m, c.train.empty() ? nullptr : &witness);
  kb_save_file(p.outputs[0], kb);
  write_text(p.outputs[1], format_selection_report(sel, m.tags()));
  log << "selected " << kb.size() << " knowledge pairs at delta " << c.delta
      << "\nwrote " << p.outputs[0] << "\nwrote " << p.outputs[1] << "\n";
  return p.outputs[0];
}

std::string cmd_train(const PipelineConfig &c, std::ostream &log) {
  check_config(Stage::kTrain, c);
  const StagePaths p = stage_paths(Stage::kTrain, c);
  TagSet tags(c.tags);
  KnowledgeBase kb = kb_load_file(p.inputs[1]);
  check_kb_tags(kb, tags, p.inputs[1]);
  auto corpus = read_corpus_file(c.train, tags, true);
  Model m = fit(corpus, c, Preset::kKnowledge, &kb);
  log_training(log, m);
  save_model_file(p.outputs[0], m);
  log << "wrote " << p.outputs[0] << "\n";
  return p.outputs[0];
}

std::string cmd_expand(const PipelineConfig &c, std::ostream &log) {
  check_config(Stage::kExpand, c);
  const StagePaths p = stage_paths(Stage::kExpand, c);
  const Model m = load_model_file(p.inputs[0]);
  check_model_tags(m, c);
  KnowledgeBase kb0 = kb_load_file(p.inputs[1]);
  check_kb_tags(kb0, m.tags(), p.inputs[1]);
  auto unlabeled = read_corpus_file(p.inputs[2], m.tags(), false);

  ExpansionOptions opts;
  opts.delta_prime = c.delta_prime;
  opts.max_iters = c.max_iters;
  opts.strict_prune = c.strict_prune;
  ExpansionResult r = expand(m, kb0, unlabeled, opts);

  kb_save_file(p.outputs[0], r.kb);
  std::ostringstream trace;
  write_trace(trace, r.trace);
  write_text(p.outputs[1], trace.str());
  log << "expanded KB from " << kb0.size() << " to " << r.kb.size()
      << " pairs in " << r.trace.iterations << " iterations\n";
  if (r.trace.reached_max_iters) {
    log << "warning: stopped at max_iters=" << c.max_iters
        << " with candidates still pending\n";
  }
  log << "wrote " << p.outputs[0] << "\nwrote " << p.outputs[1] << "\n";
  return p.outputs[0];
}

std::string cmd_predict(const PipelineConfig &c, std::ostream &log) {
  check_config(Stage::kPredict, c);
  const StagePaths p = stage_paths(Stage::kPredict, c);
  const Model m = load_model_file(p.inputs[0]);
  check_model_tags(m, c);

  KnowledgeBase kb;
  const KnowledgeBase *kb_ptr = nullptr;
  if (m.features().preset == Preset::kKnowledge) {
    const std::string kb_path = in_dir(c, c.kb, artifact::kExpandedKb);
    std::error_code ec;
    if (!fs::is_regular_file(kb_path, ec)) {
      throw IoError("knowledge model needs a KB; no such file: " + kb_path);
    }
    kb = kb_load_file(kb_path);
    check_kb_tags(kb, m.tags(), kb_path);
    kb_ptr = &kb;
    log << "using KB " << kb_path << " (" << kb.size() << " pairs)\n";
  } else if (!c.kb.empty()) {
    log << "note: model does not use knowledge features; ignoring --kb\n";
  }

  auto corpus = read_corpus_file(p.inputs[1], m.tags(), false);
  for (auto &s : corpus) {
    std::vector<std::string> labels;
    labels.reserve(s.size());
    for (int t : predict_tags(m, s, kb_ptr)) labels.push_back(m.tags().at(t));
    s.labels = std::move(labels);
  }
  write_corpus_file(p.outputs[0], corpus);
  log << "tagged " << corpus.size() << " sentences\nwrote " << p.outputs[0]
      << "\n";
  return p.outputs[0];
}

std::string cmd_eval(const PipelineConfig &c, std::ostream &log) {
  check_config(Stage::kEval, c);
  const StagePaths p = stage_paths(Stage::kEval, c);
  TagSet tags(c.tags);
  auto gold = read_corpus_file(p.inputs[0], tags, true);
  auto pred = read_corpus_file(p.inputs[1], tags, true);
  EvaluationReport r = score_corpora(gold, pred, tags, c.mode);

  nlohmann::json doc = {{"mode", std::string(match_mode_name(c.mode))},
                        {"sentences", gold.size()},
                        {"tp", r.tp},
                        {"fp", r.fp},
                        {"fn", r.fn},
                        {"precision", r.precision},
                        {"recall", r.recall},
                        {"f1", r.f1}};
  write_text(p.outputs[0], doc.dump(2) + "\n");
  log << "P=" << r.precision << " R=" << r.recall << " F1=" << r.f1
      << " (tp=" << r.tp << " fp=" << r.fp << " fn=" << r.fn << ", "
      << match_mode_name(c.mode) << ")\nwrote " << p.outputs[0] << "\n";
  return p.outputs[0];
}

std::string cmd_experiment(const PipelineConfig &c, std::ostream &log) {
  check_config(Stage::kExperiment, c);
  const StagePaths p = stage_paths(Stage::kExperiment, c);
  ExperimentSettings st;
  st.tags = TagSet(c.tags);
  st.delta = c.delta;
  st.delta_prime = c.delta_prime;
  st.sigma2 = c.sigma2;
  st.max_iters = c.max_iters;
  st.strict_prune = c.strict_prune;
  st.kb_match = c.kb_match;

  ExperimentData data = load_experiment_file(c.experiment, st.tags);
  ExperimentResult r = run_experiment(data, st);
  std::string tables;
  for (MatchMode mode : {MatchMode::kExact, MatchMode::kContainment}) {
    tables += format_table(r, mode) + "\n";
  }
  write_text(p.outputs[0], result_json(r));
  write_text(p.outputs[1], tables);
  log << tables << "wrote " << p.outputs[0] << "\nwrote " << p.outputs[1]
      << "\n";
  return p.outputs[0];
}

std::string cmd_synth(const PipelineConfig &c, std::ostream &log) {
  check_config(Stage::kSynth, c);
  const StagePaths p = stage_paths(Stage::kSynth, c);
  SyntheticCorpus sc = generate_synthetic(c.seed);
  std::vector<Sentence> subset;
  for (std::size_t i : sc.expansion_test) subset.push_back(sc.test[i]);

  write_corpus_file(p.outputs[0], sc.train);
  write_corpus_file(p.outputs[1], sc.unlabeled);
  write_corpus_file(p.outputs[2], sc.test);
  write_corpus_file(p.outputs[3], subset);
  nlohmann::json exp = {
      {"train", {"train.tsv"}},
      {"products",
       {{{"name", "synthetic"},
         {"test", "test.tsv"},
         {"unlabeled", "unlabeled.tsv"}},
        {{"name", "synthetic-expansion"},
         {"test", "test_expansion.tsv"},
         {"unlabeled", "unlabeled.tsv"}}}}};
  write_text(p.outputs[4], exp.dump(2) + "\n");
  log << "synthetic corpus (seed " << c.seed << "): " << sc.train.size()
      << " train, " << sc.unlabeled.size() << " unlabeled, "
      << sc.test.size() << " test (" << subset.size()
      << " with expansion-only verbs)\nwrote " << c.out_dir << "\n";
  return p.outputs[0];
}

std::string run_stage(Stage stage, const PipelineConfig &c,
                      std::ostream &log) {
  switch (stage) {
    case Stage::kPretrain: return cmd_pretrain(c, log);
    case Stage::kSelect: return cmd_select(c, log);
    case Stage::kTrain: return cmd_train(c, log);
    case Stage::kExpand: return cmd_expand(c, log);
    case Stage::kPredict: return cmd_predict(c, log);
    case Stage::kEval: return cmd_eval(c, log);
    case Stage::kExperiment: return cmd_experiment(c, log);
    case Stage::kSynth: return cmd_synth(c, log);
  }
  throw ValidationError("unknown stage");
}

}  // namespace kcrf
