#include "kcrf/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "kcrf/crf.hpp"
#include "kcrf/error.hpp"

namespace kcrf {

namespace {

std::vector<Sentence> predict_corpus(const Model &m,
                                     const std::vector<Sentence> &corpus,
                                     const KnowledgeBase *kb) {
  std::vector<Sentence> out = corpus;
  for (auto &s : out) {
    std::vector<std::string> labels;
    for (int t : predict_tags(m, s, kb)) labels.push_back(m.tags().at(t));
    s.labels = std::move(labels);
  }
  return out;
}

Model fit(const std::vector<Sentence> &corpus, const ExperimentSettings &st,
          Preset preset, const KnowledgeBase *kb) {
  FeatureConfig fc{preset, st.kb_match};
  FeatureVocabulary vocab = build_vocabulary(corpus, fc, kb);
  auto seqs = make_sequences(corpus, vocab, fc, st.tags, kb);
  TrainConfig tc;
  tc.sigma2 = st.sigma2;
  return train(seqs, st.tags, std::move(vocab), fc, tc);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentData &data,
                                const ExperimentSettings &st) {
  if (data.train.empty()) throw ValidationError("experiment has no training data");
  for (const auto &s : data.train) validate_sentence(s, st.tags);

  const Model no_dr = fit(data.train, st, Preset::kBasic, nullptr);
  const Model crf = fit(data.train, st, Preset::kPrimitive, nullptr);
  KnowledgeSelection sel = select_knowledge_types(crf, st.delta);
  ExperimentResult result;
  result.initial_kb = build_initial_kb(sel, crf, &data.train);
  const Model kcrf =
      fit(data.train, st, Preset::kKnowledge, &result.initial_kb);

  ExpansionOptions opts;
  opts.delta_prime = st.delta_prime;
  opts.max_iters = st.max_iters;
  opts.strict_prune = st.strict_prune;

  for (const auto &p : data.products) {
    result.products.push_back(p.name);
    ExpansionResult grown = expand(kcrf, result.initial_kb, p.unlabeled, opts);
    std::map<std::string, std::vector<Sentence>> predictions = {
        {"CRF(-)DR", predict_corpus(no_dr, p.test, nullptr)},
        {"CRF", predict_corpus(crf, p.test, nullptr)},
        {"CRF-Init", predict_corpus(kcrf, p.test, &result.initial_kb)},
        {"KCRF", predict_corpus(kcrf, p.test, &grown.kb)},
    };
    for (MatchMode mode : {MatchMode::kExact, MatchMode::kContainment}) {
      for (const auto &[system, pred] : predictions) {
        result.tables[mode][p.name][system] =
            score_corpora(p.test, pred, st.tags, mode);
      }
    }
    result.expanded_kb[p.name] = std::move(grown.kb);
    result.traces[p.name] = std::move(grown.trace);
  }
  return result;
}

ExperimentData load_experiment_file(const std::string &path,
                                    const TagSet &tags) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open experiment file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw ValidationError(path + ": " + e.what());
  }
  const std::filesystem::path base =
      std::filesystem::path(path).parent_path();
  auto resolve = [&](const nlohmann::json &p) {
    std::filesystem::path fp(p.get<std::string>());
    return (fp.is_absolute() ? fp : base / fp).string();
  };

  ExperimentData data;
  try {
    for (const auto &f : doc.at("train")) {
      auto part = read_corpus_file(resolve(f), tags, true);
      data.train.insert(data.train.end(), part.begin(), part.end());
    }
    for (const auto &p : doc.at("products")) {
      ProductData pd;
      pd.name = p.at("name").get<std::string>();
      pd.test = read_corpus_file(resolve(p.at("test")), tags, true);
      if (p.contains("unlabeled")) {
        pd.unlabeled = read_corpus_file(resolve(p.at("unlabeled")), tags, false);
      }
      data.products.push_back(std::move(pd));
    }
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(path + ": " + e.what());
  }
  return data;
}

std::string format_table(const ExperimentResult &result, MatchMode mode) {
  std::ostringstream out;
  out << "scoring: " << match_mode_name(mode) << "\n";
  out << std::left << std::setw(22) << "Product";
  for (const auto &s : kSystems) {
    out << "| " << std::setw(20) << s;
  }
  out << "\n" << std::setw(22) << "";
  for (std::size_t i = 0; i < kSystems.size(); ++i) {
    out << "| " << std::setw(7) << "P" << std::setw(7) << "R" << std::setw(6)
        << "F1";
  }
  out << "\n" << std::string(22 + 22 * kSystems.size(), '-') << "\n";
  auto tab = result.tables.find(mode);
  out << std::fixed << std::setprecision(2);
  for (const auto &product : result.products) {
    out << std::setw(22) << product;
    for (const auto &s : kSystems) {
      const EvaluationReport &r = tab->second.at(product).at(s);
      out << "| " << std::setw(7) << r.precision << std::setw(7) << r.recall
          << std::setw(6) << r.f1;
    }
    out << "\n";
  }
  return out.str();
}

std::string result_json(const ExperimentResult &result) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto &[mode, table] : result.tables) {
    nlohmann::json &m = doc["results"][std::string(match_mode_name(mode))];
    for (const auto &[product, systems] : table) {
      for (const auto &[system, r] : systems) {
        m[product][system] = {{"tp", r.tp},
                              {"fp", r.fp},
                              {"fn", r.fn},
                              {"precision", r.precision},
                              {"recall", r.recall},
                              {"f1", r.f1}};
      }
    }
  }
  doc["products"] = result.products;
  doc["initial_kb_size"] = result.initial_kb.size();
  for (const auto &[product, kb] : result.expanded_kb) {
    doc["expanded_kb_size"][product] = kb.size();
    doc["expansion_iterations"][product] = result.traces.at(product).iterations;
  }
  return doc.dump(2) + "\n";
}

std::vector<DirectionalCheck> check_directional_findings(
    const ResultTable &table, const std::vector<std::string> &products,
    const std::vector<std::string> &dr_products) {
  std::vector<DirectionalCheck> out;
  for (const auto &product : products) {
    const auto &row = table.at(product);
    const auto &kcrf = row.at("KCRF");
    DirectionalCheck c;
    c.product = product;
    c.kcrf_recall_beats_crf = kcrf.recall > row.at("CRF").recall;
    c.kcrf_f1_at_least_baselines = kcrf.f1 >= row.at("CRF(-)DR").f1 &&
                                   kcrf.f1 >= row.at("CRF").f1 &&
                                   kcrf.f1 >= row.at("CRF-Init").f1;
    if (std::find(dr_products.begin(), dr_products.end(), product) !=
        dr_products.end()) {
      c.crf_beats_no_dr = row.at("CRF").f1 > row.at("CRF(-)DR").f1;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace kcrf
