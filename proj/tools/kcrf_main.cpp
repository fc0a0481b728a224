// kcrf: knowledge-expanded CRF pipeline.
//
//   kcrf synth    --out-dir work --seed 7
//   kcrf pretrain --train work/train.tsv --out-dir work
//   kcrf select   --out-dir work
//   kcrf train    --train work/train.tsv --out-dir work
//   kcrf expand   --unlabeled work/unlabeled.tsv --out-dir work
//   kcrf predict  --test work/test.tsv --out-dir work
//   kcrf eval     --test work/test.tsv --out-dir work
//
// Every flag may also come from --config FILE (TOML or INI, "key = value");
// flags given on the command line win.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kcrf/error.hpp"
#include "kcrf/pipeline.hpp"

namespace {

struct Command {
  kcrf::Stage stage;
  const char *help;
};

constexpr Command kCommands[] = {
    {kcrf::Stage::kPretrain, "train the primitive-feature CRF"},
    {kcrf::Stage::kSelect, "select low-entropy knowledge into the initial KB"},
    {kcrf::Stage::kTrain, "train the knowledge-feature CRF on the initial KB"},
    {kcrf::Stage::kExpand, "grow the KB on unlabeled data"},
    {kcrf::Stage::kPredict, "tag a corpus with a model (and KB)"},
    {kcrf::Stage::kEval, "score predictions against gold mentions"},
    {kcrf::Stage::kExperiment, "run the four-system comparison"},
    {kcrf::Stage::kSynth, "write the synthetic bootstrap corpus"},
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Complementary entity recognition with knowledge expansion"};
  app.set_config("--config", "", "read flags from a TOML/INI file");
  app.require_subcommand(1);

  kcrf::PipelineConfig cfg;
  std::string preset = "primitive", mode = "exact", kb_match = "per-tag";

  app.add_option("--train", cfg.train, "labeled training corpus");
  app.add_option("--test", cfg.test, "test corpus (gold for eval)");
  app.add_option("--unlabeled", cfg.unlabeled, "unlabeled corpus");
  app.add_option("--model", cfg.model, "input model file");
  app.add_option("--kb", cfg.kb, "input KB file");
  app.add_option("--predictions", cfg.predictions, "predictions to evaluate");
  app.add_option("--output", cfg.output, "primary output of the stage");
  app.add_option("--trace", cfg.trace, "expansion trace file");
  app.add_option("--report", cfg.report, "selection report file");
  app.add_option("--experiment", cfg.experiment, "experiment description");
  app.add_option("--out-dir", cfg.out_dir, "artifact directory")
      ->capture_default_str();
  app.add_option("--delta", cfg.delta, "entropy threshold for selection")
      ->capture_default_str();
  app.add_option("--delta-prime", cfg.delta_prime,
                 "marginal threshold for reliable predictions")
      ->capture_default_str();
  app.add_option("--sigma2", cfg.sigma2, "L2 prior variance")
      ->capture_default_str();
  app.add_option("--max-iters", cfg.max_iters, "expansion iteration cap")
      ->capture_default_str();
  app.add_option("--preset", preset, "pretrain feature preset")
      ->check(CLI::IsMember({"basic", "primitive"}))
      ->capture_default_str();
  app.add_option("--kb-match", kb_match, "KB indicator granularity")
      ->check(CLI::IsMember({"per-tag", "flat"}))
      ->capture_default_str();
  app.add_flag("--strict-prune", cfg.strict_prune,
               "also drop candidates already in another tag's KB");
  app.add_option("--tags", cfg.tags, "tag set, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--mode", mode, "mention matching")
      ->check(CLI::IsMember({"exact", "containment"}))
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "synthetic corpus seed")
      ->capture_default_str();

  for (const auto &c : kCommands) {
    app.add_subcommand(std::string(kcrf::stage_name(c.stage)), c.help)
        ->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::FileError &e) {
    std::cerr << "kcrf: " << e.what() << "\n";
    return static_cast<int>(kcrf::Error::Kind::kIo);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return static_cast<int>(kcrf::Error::Kind::kValidation);
  }

  try {
    cfg.preset = kcrf::parse_preset(preset);
    cfg.mode = kcrf::parse_match_mode(mode);
    cfg.kb_match = kcrf::parse_kb_match(kb_match);
    for (const auto &c : kCommands) {
      if (app.got_subcommand(std::string(kcrf::stage_name(c.stage)))) {
        kcrf::run_stage(c.stage, cfg, std::cerr);
      }
    }
  } catch (const kcrf::Error &e) {
    std::cerr << "kcrf: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception &e) {
    std::cerr << "kcrf: " << e.what() << "\n";
    return static_cast<int>(kcrf::Error::Kind::kIo);
  }
  return 0;
}
