#ifndef KCRF_CRF_HPP_
#define KCRF_CRF_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kcrf/corpus.hpp"
#include "kcrf/features.hpp"

namespace kcrf {

struct TrainingInfo {
  int iterations = 0;
  double gradient_norm = 0.0;  // sup-norm at the returned weights
  double initial_objective = 0.0;
  double final_objective = 0.0;
  std::string termination;

  bool operator==(const TrainingInfo &) const = default;
};

// Linear-chain CRF parameters. All weights live in one contiguous vector:
//   [ state: M x T (feature-major) | transitions: (T + 1) x T ]
// where transition row T is the begin-of-sequence row.
class Model {
 public:
  Model(TagSet tags, FeatureVocabulary vocab, FeatureConfig features,
        double sigma2 = 1.0);

  const TagSet &tags() const { return tags_; }
  const FeatureVocabulary &vocabulary() const { return vocab_; }
  const FeatureConfig &features() const { return features_; }
  double sigma2() const { return sigma2_; }
  const TrainingInfo &training() const { return training_; }
  void set_training(TrainingInfo info) { training_ = std::move(info); }

  std::size_t num_tags() const { return tags_.size(); }
  std::size_t num_features() const { return vocab_.size(); }
  std::size_t num_parameters() const { return weights_.size(); }

  double state(int feature, int tag) const {
    return weights_[static_cast<std::size_t>(feature) * num_tags() + tag];
  }
  double &state(int feature, int tag) {
    return weights_[static_cast<std::size_t>(feature) * num_tags() + tag];
  }
  std::span<const double> state_row(int feature) const {
    return {weights_.data() + static_cast<std::size_t>(feature) * num_tags(),
            num_tags()};
  }
  // prev == num_tags() addresses the begin-of-sequence row.
  double transition(int prev, int tag) const {
    return weights_[transition_offset() + prev * num_tags() + tag];
  }
  double &transition(int prev, int tag) {
    return weights_[transition_offset() + prev * num_tags() + tag];
  }
  int bos() const { return static_cast<int>(num_tags()); }

  std::span<const double> parameters() const { return weights_; }
  std::span<double> parameters() { return weights_; }

  bool operator==(const Model &) const = default;

 private:
  std::size_t transition_offset() const { return num_features() * num_tags(); }

  TagSet tags_;
  FeatureVocabulary vocab_;
  FeatureConfig features_;
  double sigma2_;
  std::vector<double> weights_;
  TrainingInfo training_;
};

struct LabeledSequence {
  FeatureVectorSeq x;
  std::vector<int> y;
};

// Per-position tag marginals p(y_n = t | x) and the log-partition.
class MarginalTable {
 public:
  MarginalTable(std::size_t length, std::size_t tags)
      : tags_(tags), p_(length * tags, 0.0) {}

  std::size_t length() const { return tags_ ? p_.size() / tags_ : 0; }
  std::size_t tags() const { return tags_; }
  double at(std::size_t n, std::size_t t) const { return p_[n * tags_ + t]; }
  double &at(std::size_t n, std::size_t t) { return p_[n * tags_ + t]; }
  std::span<const double> row(std::size_t n) const {
    return {p_.data() + n * tags_, tags_};
  }

  double log_partition = 0.0;

 private:
  std::size_t tags_;
  std::vector<double> p_;
};

// Sum of active state weights for the chosen tags plus the transitions,
// starting from the begin-of-sequence row. Positions are 0-based here.
double score_sequence(const Model &m, const FeatureVectorSeq &x,
                      std::span<const int> y);

MarginalTable forward_backward(const Model &m, const FeatureVectorSeq &x);

// Highest-scoring tag path. Ties go to the earlier tag in the tag set.
std::vector<int> viterbi(const Model &m, const FeatureVectorSeq &x);

struct ObjectiveValue {
  double value = 0.0;
  std::vector<double> gradient;  // same layout as Model::parameters()
};

// Penalized negative log-likelihood sum(log Z - score) + |w|^2 / (2 sigma^2)
// and its gradient.
ObjectiveValue nll_and_gradient(const Model &m,
                                std::span<const LabeledSequence> batch);

struct TrainConfig {
  double sigma2 = 1.0;
  int max_iterations = 500;
  double gradient_tolerance = 1e-4;
};

// Full-batch L-BFGS from zero weights. Deterministic for a fixed input order.
Model train(std::span<const LabeledSequence> data, TagSet tags,
            FeatureVocabulary vocab, FeatureConfig features,
            const TrainConfig &config = {});

// Vectorizes and decodes one sentence; `kb` is used by the knowledge preset.
std::vector<int> predict_tags(const Model &m, const Sentence &s,
                              const KnowledgeBase *kb = nullptr);

// Turns labeled sentences into training sequences for `m`'s vocabulary.
std::vector<LabeledSequence> make_sequences(
    const std::vector<Sentence> &corpus, const FeatureVocabulary &vocab,
    const FeatureConfig &config, const TagSet &tags,
    const KnowledgeBase *kb = nullptr);

// Self-describing JSON container; load(save(m)) reproduces m exactly.
std::string save_model(const Model &m);
Model load_model(std::string_view text);
void save_model_file(const std::string &path, const Model &m);
Model load_model_file(const std::string &path);

}  // namespace kcrf

#endif  // KCRF_CRF_HPP_
