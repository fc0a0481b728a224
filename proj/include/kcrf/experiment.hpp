#ifndef KCRF_EXPERIMENT_HPP_
#define KCRF_EXPERIMENT_HPP_

#include <map>
#include <string>
#include <vector>

#include "kcrf/corpus.hpp"
#include "kcrf/eval.hpp"
#include "kcrf/expansion.hpp"
#include "kcrf/features.hpp"
#include "kcrf/knowledge.hpp"

namespace kcrf {

// The four compared systems, in table order.
inline const std::vector<std::string> kSystems = {"CRF(-)DR", "CRF",
                                                  "CRF-Init", "KCRF"};

struct ExperimentSettings {
  TagSet tags;
  double delta = kDefaultDelta;
  double delta_prime = kDefaultDeltaPrime;
  double sigma2 = 1.0;
  int max_iters = kDefaultMaxIters;
  bool strict_prune = false;
  KbMatch kb_match = KbMatch::kPerTag;
};

struct ProductData {
  std::string name;
  std::vector<Sentence> test;
  std::vector<Sentence> unlabeled;
};

struct ExperimentData {
  std::vector<Sentence> train;  // pooled labeled data
  std::vector<ProductData> products;
};

// product -> system -> report
using ResultTable = std::map<std::string, std::map<std::string, EvaluationReport>>;

struct ExperimentResult {
  std::vector<std::string> products;  // input order
  std::map<MatchMode, ResultTable> tables;
  KnowledgeBase initial_kb;
  std::map<std::string, KnowledgeBase> expanded_kb;
  std::map<std::string, ExpansionTrace> traces;
};

// Trains CRF(-)DR, CRF and KCRF once on the pooled training data, then per
// product evaluates CRF-Init (initial KB) and KCRF (KB expanded on that
// product's unlabeled data), under both scoring modes.
ExperimentResult run_experiment(const ExperimentData &data,
                                const ExperimentSettings &settings);

// Experiment description file:
// {"train": ["a.tsv", ...],
//  "products": [{"name": "Stylus", "test": "t.tsv", "unlabeled": "u.tsv"}]}
// Relative paths resolve against the file's directory. Settings are not part
// of the file; they come from the pipeline configuration.
ExperimentData load_experiment_file(const std::string &path,
                                    const TagSet &tags);

std::string format_table(const ExperimentResult &result, MatchMode mode);
std::string result_json(const ExperimentResult &result);

// Directional findings on one product.
struct DirectionalCheck {
  std::string product;
  bool kcrf_recall_beats_crf = false;
  bool kcrf_f1_at_least_baselines = false;
  bool crf_beats_no_dr = true;  // only checked where required
  bool passed() const {
    return kcrf_recall_beats_crf && kcrf_f1_at_least_baselines &&
           crf_beats_no_dr;
  }
};

// `dr_products` names the products on which CRF must beat CRF(-)DR.
std::vector<DirectionalCheck> check_directional_findings(
    const ResultTable &table, const std::vector<std::string> &products,
    const std::vector<std::string> &dr_products);

}  // namespace kcrf

#endif  // KCRF_EXPERIMENT_HPP_
