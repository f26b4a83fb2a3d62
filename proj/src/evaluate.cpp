#include "watchlist/evaluate.hpp"

#include <algorithm>
#include <set>

#include "watchlist/error.hpp"

namespace watchlist {

std::string_view to_string(Classifier c) { return c == Classifier::Margin ? "margin" : "min"; }

Classifier parse_classifier(std::string_view s) {
  if (s == "margin" || s == "svm") return Classifier::Margin;
  if (s == "min" || s == "min_rule") return Classifier::MinRule;
  throw InvalidArgument("unknown classifier '" + std::string(s) + "'");
}

LooFeatureTable compute_loo_features(const ScoreSet& s, std::span<const MetricId> metrics,
                                     std::span<const std::size_t> slots, const EvalConfig& cfg) {
  s.require_range();
  const auto full = assign_drc(s, cfg.landscape.percentile);
  const auto n = s.subject_count();

  LooFeatureTable t;
  t.subjects = s.subjects();
  t.metrics.assign(metrics.begin(), metrics.end());
  t.truth.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.truth[i] = full.entries[i].category;
  t.vectors.resize(metrics.size());
  for (auto& per_metric : t.vectors)
    for (auto& v : per_metric) v.assign(n, std::nullopt);
  for (auto& r : t.skip_reason) r.assign(n, {});

  CellMask mask;
  for (const auto slot : slots) {
    if (slot >= 6) throw InvalidArgument("slot index out of range");
    mask |= cells_for(static_cast<ComparisonQuality>(slot % 3),
                      static_cast<ComparisonKind>(slot / 3));
  }

  // Slices for every subject in one pass over the records.
  std::vector<std::array<std::vector<double>, 6>> slices(n);
  for (const auto& e : s.entries()) {
    const auto slot = slot_index(e.quality, e.kind);
    slices[e.a][slot].push_back(e.score);
    if (e.b != e.a) slices[e.b][slot].push_back(e.score);
  }
  for (const auto slot : slots)
    for (std::size_t i = 0; i < n; ++i)
      if (!slices[i][slot].empty()) ++t.usable[slot];

  kernels::for_each_index(cfg.exec, n, [&](std::size_t i) {
    const bool any = std::any_of(slots.begin(), slots.end(),
                                 [&](std::size_t slot) { return !slices[i][slot].empty(); });
    if (!any) {
      for (const auto slot : slots) t.skip_reason[slot][i] = "no scores in cell";
      return;
    }
    const auto& id = t.subjects[i];
    std::optional<Landscape> fold;
    std::string fold_error;
    try {
      const auto a = assign_drc(s, cfg.landscape.percentile, id);
      fold = build_landscape(s, a, id, cfg.landscape, mask);
    } catch (const Error& e) {
      fold_error = e.what();
    }
    for (const auto slot : slots) {
      const auto& scores = slices[i][slot];
      if (scores.empty()) {
        t.skip_reason[slot][i] = "no scores in cell";
        continue;
      }
      if (!fold) {
        t.skip_reason[slot][i] = fold_error;
        continue;
      }
      const auto q = static_cast<ComparisonQuality>(slot % 3);
      const auto k = static_cast<ComparisonKind>(slot / 3);
      const auto traveler =
          build_distribution(scores, cfg.landscape.bins, cfg.landscape.bandwidth, Execution::Serial);
      try {
        for (std::size_t m = 0; m < metrics.size(); ++m)
          t.vectors[m][slot][i] = dissimilarity_vector(metrics[m], traveler, *fold, q, k);
      } catch (const Error& e) {
        t.skip_reason[slot][i] = e.what();
      }
    }
  });
  return t;
}

std::vector<std::optional<DrcCategory>> loo_margin_predictions(
    std::span<const std::optional<FeatureVector>> features, std::span<const DrcCategory> labels,
    const MarginHyper& hyper, Execution exec, const TrainingObserver& observer) {
  if (features.size() != labels.size())
    throw InvalidArgument("features and labels differ in length");
  const auto n = features.size();
  std::vector<std::optional<DrcCategory>> out(n);
  kernels::for_each_index(exec, n, [&](std::size_t i) {
    if (!features[i]) return;
    std::vector<FeatureVector> train;
    std::vector<DrcCategory> train_labels;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !features[j]) continue;
      train.push_back(*features[j]);
      train_labels.push_back(labels[j]);
    }
    if (observer) observer(i, train);
    if (std::set<DrcCategory>(train_labels.begin(), train_labels.end()).size() < 2) return;
    const auto model = train_margin(train, train_labels, hyper);
    out[i] = predict_margin(model, *features[i]);
  });
  return out;
}

namespace {

std::vector<std::size_t> slots_for(ComparisonQuality q, ComparisonKind k, Classifier c,
                                   FeatureMode mode) {
  if (c == Classifier::Margin && mode == FeatureMode::Combined)
    return {slot_index(q, ComparisonKind::Genuine), slot_index(q, ComparisonKind::Impostor)};
  return {slot_index(q, k)};
}

struct CellOutcome {
  std::vector<SubjectPrediction> predictions;
  std::size_t skipped = 0;
};

CellOutcome evaluate_cell(const LooFeatureTable& t, std::size_t metric, ComparisonQuality q,
                          ComparisonKind k, Classifier c, const EvalConfig& cfg) {
  const auto slot = slot_index(q, k);
  if (t.usable[slot] < 3)
    throw InvalidArgument("fewer than 3 subjects with " + std::string(to_string(q)) + " " +
                          std::string(to_string(k)) + " scores");
  const auto& vecs = t.vectors[metric][slot];
  const auto n = t.subjects.size();

  std::vector<std::optional<DrcCategory>> predicted(n);
  if (c == Classifier::MinRule) {
    for (std::size_t i = 0; i < n; ++i)
      if (vecs[i]) predicted[i] = min_rule(*vecs[i]);
  } else {
    std::vector<std::optional<FeatureVector>> features(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!vecs[i]) continue;
      if (cfg.features == FeatureMode::Combined) {
        const auto& g = t.vectors[metric][slot_index(q, ComparisonKind::Genuine)][i];
        const auto& im = t.vectors[metric][slot_index(q, ComparisonKind::Impostor)][i];
        if (g && im) features[i] = make_features(*g, *im);
      } else {
        features[i] = make_features(*vecs[i]);
      }
    }
    predicted = loo_margin_predictions(features, t.truth, cfg.margin, cfg.exec);
  }

  CellOutcome out;
  for (std::size_t i = 0; i < n; ++i) {
    if (predicted[i]) {
      out.predictions.push_back({t.subjects[i], t.truth[i], predicted[i]});
    } else if (vecs[i] || t.skip_reason[slot][i] != "no scores in cell") {
      ++out.skipped;
    }
  }
  if (out.predictions.empty())
    throw InvalidArgument("no subject could be evaluated in " + std::string(to_string(q)) + " " +
                          std::string(to_string(k)));
  return out;
}

LoocvResult to_result(CellOutcome o) {
  LoocvResult r;
  r.predictions = std::move(o.predictions);
  r.skipped = o.skipped;
  r.total = r.predictions.size();
  for (const auto& p : r.predictions)
    if (p.predicted == p.truth) ++r.correct;
  r.sensitivity = static_cast<double>(r.correct) / static_cast<double>(r.total);
  return r;
}

}  // namespace

LoocvResult loocv(const ScoreSet& s, MetricId metric, ComparisonQuality quality,
                  ComparisonKind kind, Classifier classifier, const EvalConfig& cfg) {
  const auto slots = slots_for(quality, kind, classifier, cfg.features);
  const std::array<MetricId, 1> metrics{metric};
  const auto table = compute_loo_features(s, metrics, slots, cfg);
  return to_result(evaluate_cell(table, 0, quality, kind, classifier, cfg));
}

const SensitivityCell& SensitivityTable::at(MetricId m, Classifier c, ComparisonKind k,
                                            ComparisonQuality q) const {
  for (const auto& cell : cells)
    if (cell.metric == m && cell.classifier == c && cell.kind == k && cell.quality == q) return cell;
  throw InvalidArgument("sensitivity cell not present in table");
}

double SensitivityTable::mean(ComparisonKind k, std::optional<Classifier> c) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& cell : cells) {
    if (cell.kind != k || !cell.sensitivity) continue;
    if (c && cell.classifier != *c) continue;
    sum += *cell.sensitivity;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

SensitivityTable sensitivity_table(const ScoreSet& s, std::span<const MetricId> metrics,
                                   std::span<const Classifier> classifiers,
                                   const EvalConfig& cfg) {
  SensitivityTable out;
  out.metrics.assign(metrics.begin(), metrics.end());
  out.classifiers.assign(classifiers.begin(), classifiers.end());

  const std::array<std::size_t, 6> all_slots{0, 1, 2, 3, 4, 5};
  const auto table = compute_loo_features(s, metrics, all_slots, cfg);

  for (std::size_t m = 0; m < metrics.size(); ++m) {
    for (const auto c : classifiers) {
      for (const auto k : kKinds) {
        for (const auto q : kQualities) {
          SensitivityCell cell{metrics[m], c, k, q, std::nullopt, 0, 0, {}};
          try {
            const auto r = to_result(evaluate_cell(table, m, q, k, c, cfg));
            cell.sensitivity = r.sensitivity;
            cell.correct = r.correct;
            cell.total = r.total;
          } catch (const Error& e) {
            cell.reason = e.what();
          }
          out.cells.push_back(std::move(cell));
        }
      }
    }
  }
  return out;
}

}  // namespace watchlist
