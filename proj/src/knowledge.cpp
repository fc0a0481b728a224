#include "kcrf/knowledge.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "kcrf/error.hpp"

namespace kcrf {

std::vector<double> tag_distribution(std::span<const double> weights) {
  if (weights.empty()) throw ValidationError("no weights to normalize");
  double hi = weights[0];
  for (double w : weights) {
    if (!std::isfinite(w)) throw NumericalError("non-finite feature weight");
    hi = std::max(hi, w);
  }
  std::vector<double> p(weights.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    p[i] = std::exp(weights[i] - hi);
    sum += p[i];
  }
  for (double &x : p) x /= sum;
  return p;
}

double feature_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

KnowledgeSelection select_knowledge_types(const Model &m, double delta) {
  if (m.features().preset != Preset::kPrimitive) {
    throw ValidationError(
        "knowledge selection needs a model trained with the primitive preset, "
        "got '" + std::string(preset_name(m.features().preset)) + "'");
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw ValidationError("delta must be a non-negative number");
  }
  const std::size_t tags = m.num_tags();
  KnowledgeSelection sel;
  sel.delta = delta;
  sel.max_entropy = std::log(static_cast<double>(tags));
  sel.features.resize(tags);
  sel.types.resize(tags);

  for (std::size_t r = 0; r < m.num_features(); ++r) {
    const std::string &name = m.vocabulary().name(static_cast<int>(r));
    auto prim = parse_primitive(name);
    if (!prim) continue;
    auto row = m.state_row(static_cast<int>(r));
    if (std::all_of(row.begin(), row.end(), [](double w) { return w == 0.0; })) {
      continue;
    }
    SelectionEntry e;
    e.feature = static_cast<int>(r);
    e.name = name;
    e.distribution = tag_distribution(row);
    e.entropy = feature_entropy(e.distribution);
    auto best = std::max_element(e.distribution.begin(), e.distribution.end());
    if (std::count(e.distribution.begin(), e.distribution.end(), *best) == 1) {
      e.winner = static_cast<int>(best - e.distribution.begin());
    }
    e.selected = e.winner && e.entropy < delta;
    if (e.selected) {
      sel.features[*e.winner].insert(e.feature);
      sel.types[*e.winner].insert(primitive_to_kv(*prim).first);
    }
    sel.report.push_back(std::move(e));
  }
  return sel;
}

KnowledgeBase build_initial_kb(const KnowledgeSelection &selection,
                               const Model &m,
                               const std::vector<Sentence> *corpus) {
  std::set<std::pair<KnowledgeType, std::string>> witnessed;
  if (corpus) {
    for (const auto &s : *corpus) {
      for (int n = 1; n <= static_cast<int>(s.size()); ++n) {
        for (const auto &p : extract_primitive(s, n)) {
          witnessed.insert(primitive_to_kv(p));
        }
      }
    }
  }
  KnowledgeBase kb;
  for (std::size_t t = 0; t < selection.features.size(); ++t) {
    for (int r : selection.features[t]) {
      auto prim = parse_primitive(m.vocabulary().name(r));
      if (!prim) continue;
      auto kv = primitive_to_kv(*prim);
      if (corpus && !witnessed.count(kv)) continue;
      kb.add(m.tags().at(t), kv.first, kv.second);
    }
  }
  return kb;
}

std::string format_selection_report(const KnowledgeSelection &selection,
                                    const TagSet &tags) {
  std::ostringstream out;
  out << "# delta=" << selection.delta << " ln|T|=" << std::setprecision(6)
      << selection.max_entropy << "\n";
  for (std::size_t t = 0; t < tags.size(); ++t) {
    out << "# " << tags.at(t) << ": " << selection.features[t].size()
        << " features, " << selection.types[t].size() << " types\n";
  }
  out << "feature\tentropy\twinner\tselected";
  for (const auto &tag : tags.tags()) out << "\tp(" << tag << ")";
  out << "\n";
  out << std::fixed << std::setprecision(6);
  for (const auto &e : selection.report) {
    out << e.name << '\t' << e.entropy << '\t'
        << (e.winner ? tags.at(*e.winner) : std::string("-")) << '\t'
        << (e.selected ? "yes" : "no");
    for (double p : e.distribution) out << '\t' << p;
    out << "\n";
  }
  return out.str();
}

}  // namespace kcrf
