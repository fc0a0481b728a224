#include "kcrf/crf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <ceres/ceres.h>
#include <json.hpp>

#include "kcrf/error.hpp"

namespace kcrf {

Model::Model(TagSet tags, FeatureVocabulary vocab, FeatureConfig features,
             double sigma2)
    : tags_(std::move(tags)),
      vocab_(std::move(vocab)),
      features_(features),
      sigma2_(sigma2) {
  if (!(sigma2_ > 0.0) || !std::isfinite(sigma2_)) {
    throw ValidationError("regularization variance must be positive");
  }
  vocab_.freeze();
  weights_.assign(vocab_.size() * tags_.size() +
                      (tags_.size() + 1) * tags_.size(),
                  0.0);
}

namespace {

double log_sum_exp(std::span<const double> v) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : v) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - hi);
  return hi + std::log(sum);
}

void check_features(const Model &m, const FeatureVectorSeq &x) {
  const int limit = static_cast<int>(m.num_features());
  for (const auto &pos : x) {
    for (int r : pos) {
      if (r < 0 || r >= limit) {
        throw ValidationError("feature id " + std::to_string(r) +
                              " outside the model vocabulary");
      }
    }
  }
}

// Log-space forward/backward tables for one sequence.
struct Lattice {
  std::size_t length = 0;
  std::size_t tags = 0;
  std::vector<double> emit;   // length x tags
  std::vector<double> alpha;  // length x tags
  std::vector<double> beta;   // length x tags
  double log_z = 0.0;

  double &e(std::size_t n, std::size_t t) { return emit[n * tags + t]; }
  double &a(std::size_t n, std::size_t t) { return alpha[n * tags + t]; }
  double &b(std::size_t n, std::size_t t) { return beta[n * tags + t]; }
};

void compute_emissions(const Model &m, const FeatureVectorSeq &x,
                       Lattice *lat) {
  const std::size_t tags = m.num_tags();
  lat->length = x.size();
  lat->tags = tags;
  lat->emit.assign(x.size() * tags, 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (int r : x[n]) {
      auto row = m.state_row(r);
      for (std::size_t t = 0; t < tags; ++t) lat->e(n, t) += row[t];
    }
  }
}

Lattice run_lattice(const Model &m, const FeatureVectorSeq &x) {
  check_features(m, x);
  Lattice lat;
  compute_emissions(m, x, &lat);
  const std::size_t len = lat.length;
  const std::size_t tags = lat.tags;
  lat.alpha.assign(len * tags, 0.0);
  lat.beta.assign(len * tags, 0.0);
  if (len == 0) return lat;

  std::vector<double> buf(tags);
  for (std::size_t t = 0; t < tags; ++t) {
    lat.a(0, t) = m.transition(m.bos(), t) + lat.e(0, t);
  }
  for (std::size_t n = 1; n < len; ++n) {
    for (std::size_t t = 0; t < tags; ++t) {
      for (std::size_t s = 0; s < tags; ++s) {
        buf[s] = lat.a(n - 1, s) + m.transition(s, t);
      }
      lat.a(n, t) = log_sum_exp(buf) + lat.e(n, t);
    }
  }
  for (std::size_t n = len - 1; n-- > 0;) {
    for (std::size_t s = 0; s < tags; ++s) {
      for (std::size_t t = 0; t < tags; ++t) {
        buf[t] = m.transition(s, t) + lat.e(n + 1, t) + lat.b(n + 1, t);
      }
      lat.b(n, s) = log_sum_exp(buf);
    }
  }
  lat.log_z = log_sum_exp(
      std::span<const double>(lat.alpha.data() + (len - 1) * tags, tags));
  return lat;
}

}  // namespace

double score_sequence(const Model &m, const FeatureVectorSeq &x,
                      std::span<const int> y) {
  if (x.size() != y.size()) {
    throw ValidationError("tag sequence length differs from input length");
  }
  check_features(m, x);
  const int tags = static_cast<int>(m.num_tags());
  double score = 0.0;
  int prev = m.bos();
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (y[n] < 0 || y[n] >= tags) {
      throw ValidationError("tag index out of range");
    }
    for (int r : x[n]) score += m.state(r, y[n]);
    score += m.transition(prev, y[n]);
    prev = y[n];
  }
  return score;
}

MarginalTable forward_backward(const Model &m, const FeatureVectorSeq &x) {
  Lattice lat = run_lattice(m, x);
  MarginalTable table(lat.length, lat.tags);
  table.log_partition = lat.log_z;
  // Each row is normalized by its own log-sum-exp rather than log Z: on long
  // chains alpha + beta and log Z are large and their difference loses bits.
  std::vector<double> row(lat.tags);
  for (std::size_t n = 0; n < lat.length; ++n) {
    for (std::size_t t = 0; t < lat.tags; ++t) {
      row[t] = lat.a(n, t) + lat.b(n, t);
    }
    const double norm = log_sum_exp(row);
    for (std::size_t t = 0; t < lat.tags; ++t) {
      table.at(n, t) = std::exp(row[t] - norm);
    }
  }
  return table;
}

std::vector<int> viterbi(const Model &m, const FeatureVectorSeq &x) {
  check_features(m, x);
  Lattice lat;
  compute_emissions(m, x, &lat);
  const std::size_t len = lat.length;
  const std::size_t tags = lat.tags;
  if (len == 0) return {};

  std::vector<double> best(len * tags);
  std::vector<int> back(len * tags, 0);
  for (std::size_t t = 0; t < tags; ++t) {
    best[t] = m.transition(m.bos(), t) + lat.e(0, t);
  }
  for (std::size_t n = 1; n < len; ++n) {
    for (std::size_t t = 0; t < tags; ++t) {
      int arg = 0;
      double hi = best[(n - 1) * tags] + m.transition(0, t);
      for (std::size_t s = 1; s < tags; ++s) {
        double v = best[(n - 1) * tags + s] + m.transition(s, t);
        if (v > hi) {
          hi = v;
          arg = static_cast<int>(s);
        }
      }
      best[n * tags + t] = hi + lat.e(n, t);
      back[n * tags + t] = arg;
    }
  }
  std::vector<int> path(len);
  int arg = 0;
  for (std::size_t t = 1; t < tags; ++t) {
    if (best[(len - 1) * tags + t] > best[(len - 1) * tags + arg]) {
      arg = static_cast<int>(t);
    }
  }
  path[len - 1] = arg;
  for (std::size_t n = len - 1; n > 0; --n) {
    path[n - 1] = back[n * tags + path[n]];
  }
  return path;
}

ObjectiveValue nll_and_gradient(const Model &m,
                                std::span<const LabeledSequence> batch) {
  const std::size_t tags = m.num_tags();
  const int bos = m.bos();
  ObjectiveValue out;
  out.gradient.assign(m.num_parameters(), 0.0);
  std::vector<double> &g = out.gradient;
  const std::size_t trans_off = m.num_features() * tags;
  auto trans_grad = [&](int prev, std::size_t t) -> double & {
    return g[trans_off + prev * tags + t];
  };

  for (const auto &seq : batch) {
    const auto &x = seq.x;
    const auto &y = seq.y;
    const double gold = score_sequence(m, x, y);
    Lattice lat = run_lattice(m, x);
    if (lat.length == 0) continue;
    out.value += lat.log_z - gold;

    for (std::size_t n = 0; n < lat.length; ++n) {
      for (std::size_t t = 0; t < tags; ++t) {
        const double p = std::exp(lat.a(n, t) + lat.b(n, t) - lat.log_z);
        for (int r : x[n]) g[r * tags + t] += p;
        if (n == 0) trans_grad(bos, t) += p;
      }
      for (int r : x[n]) g[r * tags + y[n]] -= 1.0;
    }
    trans_grad(bos, y[0]) -= 1.0;
    for (std::size_t n = 1; n < lat.length; ++n) {
      for (std::size_t s = 0; s < tags; ++s) {
        for (std::size_t t = 0; t < tags; ++t) {
          trans_grad(static_cast<int>(s), t) +=
              std::exp(lat.a(n - 1, s) + m.transition(s, t) + lat.e(n, t) +
                       lat.b(n, t) - lat.log_z);
        }
      }
      trans_grad(y[n - 1], y[n]) -= 1.0;
    }
  }

  const double inv = 1.0 / m.sigma2();
  auto w = m.parameters();
  double sq = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    sq += w[i] * w[i];
    g[i] += w[i] * inv;
  }
  out.value += 0.5 * sq * inv;
  return out;
}

namespace {

class CrfObjective : public ceres::FirstOrderFunction {
 public:
  CrfObjective(Model *scratch, std::span<const LabeledSequence> data)
      : scratch_(scratch), data_(data) {}

  bool Evaluate(const double *parameters, double *cost,
                double *gradient) const override {
    auto w = scratch_->parameters();
    std::copy(parameters, parameters + w.size(), w.begin());
    ObjectiveValue v = nll_and_gradient(*scratch_, data_);
    if (!std::isfinite(v.value)) return false;
    *cost = v.value;
    if (gradient) std::copy(v.gradient.begin(), v.gradient.end(), gradient);
    return true;
  }

  int NumParameters() const override {
    return static_cast<int>(scratch_->num_parameters());
  }

 private:
  Model *scratch_;
  std::span<const LabeledSequence> data_;
};

class IterationGuard : public ceres::IterationCallback {
 public:
  ceres::CallbackReturnType operator()(
      const ceres::IterationSummary &summary) override {
    if (!std::isfinite(summary.cost)) {
      bad_iteration = summary.iteration;
      return ceres::SOLVER_ABORT;
    }
    return ceres::SOLVER_CONTINUE;
  }

  int bad_iteration = -1;
};

double sup_norm(const std::vector<double> &v) {
  double hi = 0.0;
  for (double x : v) hi = std::max(hi, std::abs(x));
  return hi;
}

}  // namespace

Model train(std::span<const LabeledSequence> data, TagSet tags,
            FeatureVocabulary vocab, FeatureConfig features,
            const TrainConfig &config) {
  if (data.empty()) throw ValidationError("cannot train on an empty corpus");
  Model model(std::move(tags), std::move(vocab), features, config.sigma2);
  for (const auto &seq : data) {
    if (seq.x.size() != seq.y.size()) {
      throw ValidationError("training sequence has mismatched labels");
    }
  }

  Model scratch = model;
  std::vector<double> w(model.num_parameters(), 0.0);
  const double initial = nll_and_gradient(model, data).value;

  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_num_iterations = config.max_iterations;
  options.gradient_tolerance = config.gradient_tolerance;
  options.function_tolerance = 0.0;
  options.parameter_tolerance = 0.0;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;
  IterationGuard guard;
  options.callbacks.push_back(&guard);

  ceres::GradientProblem problem(new CrfObjective(&scratch, data));
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(options, problem, w.data(), &summary);

  if (guard.bad_iteration >= 0) {
    throw NumericalError("objective became non-finite at iteration " +
                         std::to_string(guard.bad_iteration));
  }
  auto params = model.parameters();
  std::copy(w.begin(), w.end(), params.begin());
  ObjectiveValue final_value = nll_and_gradient(model, data);
  for (double x : w) {
    if (!std::isfinite(x)) {
      throw NumericalError("training produced non-finite weights after " +
                           std::to_string(summary.iterations.size()) +
                           " iterations");
    }
  }
  if (!std::isfinite(final_value.value)) {
    throw NumericalError("final objective is non-finite");
  }

  TrainingInfo info;
  info.iterations = summary.iterations.empty()
                        ? 0
                        : summary.iterations.back().iteration;
  info.gradient_norm = sup_norm(final_value.gradient);
  info.initial_objective = initial;
  info.final_objective = final_value.value;
  info.termination = ceres::TerminationTypeToString(summary.termination_type);
  model.set_training(std::move(info));
  return model;
}

std::vector<int> predict_tags(const Model &m, const Sentence &s,
                              const KnowledgeBase *kb) {
  return viterbi(m, vectorize(s, m.vocabulary(), m.features(), kb));
}

std::vector<LabeledSequence> make_sequences(const std::vector<Sentence> &corpus,
                                            const FeatureVocabulary &vocab,
                                            const FeatureConfig &config,
                                            const TagSet &tags,
                                            const KnowledgeBase *kb) {
  std::vector<LabeledSequence> out;
  out.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Sentence &s = corpus[i];
    if (!s.labels) {
      throw ValidationError("sentence " + std::to_string(i + 1) +
                            " has no labels");
    }
    LabeledSequence seq;
    seq.x = vectorize(s, vocab, config, kb);
    for (const auto &l : *s.labels) {
      int t = tags.index(l);
      if (t < 0) throw ValidationError("unknown label '" + l + "'");
      seq.y.push_back(t);
    }
    out.push_back(std::move(seq));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {
constexpr std::string_view kModelFormat = "kcrf-model";
constexpr int kModelVersion = 1;
}  // namespace

std::string save_model(const Model &m) {
  using nlohmann::json;
  const std::size_t tags = m.num_tags();
  json state = json::array();
  for (std::size_t r = 0; r < m.num_features(); ++r) {
    auto row = m.state_row(static_cast<int>(r));
    state.push_back(std::vector<double>(row.begin(), row.end()));
  }
  json trans = json::array();
  for (std::size_t s = 0; s <= tags; ++s) {
    std::vector<double> row(tags);
    for (std::size_t t = 0; t < tags; ++t) {
      row[t] = m.transition(static_cast<int>(s), static_cast<int>(t));
    }
    trans.push_back(row);
  }
  const TrainingInfo &info = m.training();
  json doc = {
      {"format", kModelFormat},
      {"version", kModelVersion},
      {"tags", m.tags().tags()},
      {"features",
       {{"preset", preset_name(m.features().preset)},
        {"kb_match", kb_match_name(m.features().kb_match)}}},
      {"sigma2", m.sigma2()},
      {"training",
       {{"iterations", info.iterations},
        {"gradient_norm", info.gradient_norm},
        {"initial_objective", info.initial_objective},
        {"final_objective", info.final_objective},
        {"termination", info.termination}}},
      {"vocabulary", m.vocabulary().names()},
      {"state_weights", std::move(state)},
      {"transition_weights", std::move(trans)},
  };
  return doc.dump() + "\n";
}

Model load_model(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ValidationError(std::string("model file: ") + e.what());
  }
  try {
    if (doc.at("format") != kModelFormat) {
      throw ValidationError("model file: not a kcrf model");
    }
    if (doc.at("version") != kModelVersion) {
      throw ValidationError("model file: unsupported version");
    }
    TagSet tags(doc.at("tags").get<std::vector<std::string>>());
    FeatureConfig features;
    features.preset = parse_preset(doc.at("features").at("preset").get<std::string>());
    features.kb_match =
        parse_kb_match(doc.at("features").at("kb_match").get<std::string>());
    FeatureVocabulary vocab(doc.at("vocabulary").get<std::vector<std::string>>());
    Model m(std::move(tags), std::move(vocab), features,
            doc.at("sigma2").get<double>());

    const auto &state = doc.at("state_weights");
    const auto &trans = doc.at("transition_weights");
    const std::size_t nt = m.num_tags();
    if (state.size() != m.num_features() || trans.size() != nt + 1) {
      throw ValidationError("model file: weight dimensions do not match");
    }
    for (std::size_t r = 0; r < state.size(); ++r) {
      auto row = state[r].get<std::vector<double>>();
      if (row.size() != nt) {
        throw ValidationError("model file: state row " + std::to_string(r) +
                              " has wrong width");
      }
      for (std::size_t t = 0; t < nt; ++t) {
        m.state(static_cast<int>(r), static_cast<int>(t)) = row[t];
      }
    }
    for (std::size_t s = 0; s <= nt; ++s) {
      auto row = trans[s].get<std::vector<double>>();
      if (row.size() != nt) {
        throw ValidationError("model file: transition row has wrong width");
      }
      for (std::size_t t = 0; t < nt; ++t) {
        m.transition(static_cast<int>(s), static_cast<int>(t)) = row[t];
      }
    }
    const auto &tr = doc.at("training");
    TrainingInfo info;
    info.iterations = tr.at("iterations").get<int>();
    info.gradient_norm = tr.at("gradient_norm").get<double>();
    info.initial_objective = tr.at("initial_objective").get<double>();
    info.final_objective = tr.at("final_objective").get<double>();
    info.termination = tr.at("termination").get<std::string>();
    m.set_training(std::move(info));
    return m;
  } catch (const json::exception &e) {
    throw ValidationError(std::string("model file: ") + e.what());
  }
}

void save_model_file(const std::string &path, const Model &m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file " + path);
  out << save_model(m);
  if (!out) throw IoError("write failed for " + path);
}

Model load_model_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return load_model(ss.str());
  } catch (const ValidationError &e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace kcrf
