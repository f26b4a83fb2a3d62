#include "watchlist/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "watchlist/error.hpp"
#include "watchlist/evaluate.hpp"

namespace watchlist {

CostProfile CostProfile::standard() {
  CostProfile c;
  c.name = "default";
  c.lambda[DrcCategory::Sheep] = 0.1;
  c.lambda[DrcCategory::Goat] = 0.3;
  c.lambda[DrcCategory::WolfLamb] = 0.6;
  return c;
}

void CostProfile::validate() const {
  for (const auto c : kCategories) {
    const double v = lambda[c];
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidArgument("cost for " + std::string(to_string(c)) + " must be finite and >= 0");
  }
}

double CostProfile::total() const {
  return lambda[DrcCategory::Sheep] + lambda[DrcCategory::Goat] + lambda[DrcCategory::WolfLamb];
}

double risk_r1(const CostProfile& c, const CategoryMap<double>& d) {
  double weighted = 0.0;
  for (const auto cat : kCategories) weighted += c.lambda[cat] * d[cat];
  return std::clamp(1.0 - weighted, 0.0, 1.0);
}

std::string_view to_string(RiskLevel l) {
  switch (l) {
    case RiskLevel::Low: return "low";
    case RiskLevel::Medium: return "medium";
    case RiskLevel::High: return "high";
  }
  return "?";
}

RiskLevel risk_level(double r, const RiskThresholds& t) {
  if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("risk value outside [0,1]");
  if (r >= t.high) return RiskLevel::High;
  if (r >= t.medium) return RiskLevel::Medium;
  return RiskLevel::Low;
}

std::string_view to_string(RiskVariant v) {
  switch (v) {
    case RiskVariant::R1: return "R1";
    case RiskVariant::R2: return "R2";
    case RiskVariant::R3: return "R3";
  }
  return "?";
}

double mean_risk(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("no risk values to average");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::string RiskReport::variant_set() const {
  std::string out;
  for (const auto v : variants) {
    if (!out.empty()) out += '+';
    out += to_string(v);
  }
  return out;
}

namespace {

// Slices of one subject, ignoring records that involve `skip`.
std::array<std::vector<double>, 6> slices_of(const ScoreSet& s, std::uint32_t subject,
                                             std::optional<std::uint32_t> skip) {
  std::array<std::vector<double>, 6> out;
  for (const auto& e : s.entries()) {
    if (!e.involves(subject) || (skip && e.involves(*skip))) continue;
    out[slot_index(e.quality, e.kind)].push_back(e.score);
  }
  return out;
}

bool cells_populated(const Landscape& l, ComparisonQuality q, ComparisonKind k) {
  return std::all_of(kCategories.begin(), kCategories.end(),
                     [&](DrcCategory c) { return !l.cell(c, q, k).empty(); });
}

std::array<std::optional<DissimilarityVector>, 6> vectors_for(
    const std::array<std::vector<double>, 6>& slices, const Landscape& l, MetricId metric) {
  std::array<std::optional<DissimilarityVector>, 6> out;
  for (const auto k : kKinds) {
    for (const auto q : kQualities) {
      const auto slot = slot_index(q, k);
      if (slices[slot].empty() || !cells_populated(l, q, k)) continue;
      const auto d = build_distribution(slices[slot], l.params.bins, l.params.bandwidth,
                                        l.params.exec);
      out[slot] = dissimilarity_vector(metric, d, l, q, k);
    }
  }
  return out;
}

std::optional<FeatureVector> features_for(const std::array<std::optional<DissimilarityVector>, 6>& v,
                                          ComparisonQuality q, ComparisonKind k, FeatureMode mode) {
  if (mode == FeatureMode::PerKind) {
    const auto& d = v[slot_index(q, k)];
    return d ? std::optional(make_features(*d)) : std::nullopt;
  }
  const auto& g = v[slot_index(q, ComparisonKind::Genuine)];
  const auto& i = v[slot_index(q, ComparisonKind::Impostor)];
  if (!g || !i) return std::nullopt;
  return make_features(*g, *i);
}

}  // namespace

MarginBank train_margin_bank(const ScoreSet& s, const Landscape& l, MetricId metric,
                             FeatureMode mode, const MarginHyper& hyper) {
  std::optional<std::uint32_t> skip;
  if (l.excluded) skip = s.index_of(*l.excluded);
  if (l.assignment.subjects != s.subjects())
    throw InvalidArgument("landscape was not built from this score set");

  std::array<std::vector<FeatureVector>, 6> features;
  std::array<std::vector<DrcCategory>, 6> labels;
  for (std::uint32_t i = 0; i < s.subject_count(); ++i) {
    if (skip && *skip == i) continue;
    const auto vecs = vectors_for(slices_of(s, i, skip), l, metric);
    for (const auto k : kKinds) {
      for (const auto q : kQualities) {
        const auto f = features_for(vecs, q, k, mode);
        if (!f) continue;
        features[slot_index(q, k)].push_back(*f);
        labels[slot_index(q, k)].push_back(l.assignment.entries[i].category);
      }
    }
  }

  MarginBank bank;
  for (std::size_t slot = 0; slot < 6; ++slot) {
    if (std::set<DrcCategory>(labels[slot].begin(), labels[slot].end()).size() < 2) continue;
    bank[slot] = train_margin(features[slot], labels[slot], hyper);
  }
  return bank;
}

RiskReport assess_traveler(const SubjectId& subject, const ScoreSet& s, const Landscape& l,
                           MetricId metric, const CostProfile& costs, const AssessOptions& opts) {
  const auto id = s.index_of(subject);
  if (l.excluded != subject)
    throw InvalidArgument("landscape must be built without subject '" + subject + "'");
  costs.validate();

  const auto vecs = vectors_for(slices_of(s, id, std::nullopt), l, metric);

  RiskReport r;
  r.subject = subject;
  r.metric = metric;
  r.cost_profile = costs.name;
  r.landscape_version = l.version;
  r.variants.push_back(RiskVariant::R1);
  if (opts.min_rule) r.variants.push_back(RiskVariant::R2);
  if (opts.margin) r.variants.push_back(RiskVariant::R3);
  r.headline = opts.min_rule ? RiskVariant::R2 : opts.margin ? RiskVariant::R3 : RiskVariant::R1;

  std::array<std::vector<double>, 3> by_variant;
  for (const auto k : kKinds) {
    for (const auto q : kQualities) {
      const auto slot = slot_index(q, k);
      if (!vecs[slot]) continue;
      RiskCell cell;
      cell.quality = q;
      cell.kind = k;
      cell.dissimilarity = *vecs[slot];
      cell.r1 = risk_r1(costs, cell.dissimilarity);
      by_variant[0].push_back(cell.r1);
      if (opts.min_rule) {
        cell.min_prediction = min_rule(cell.dissimilarity);
        cell.r2 = risk_classified(costs, *cell.min_prediction);
        by_variant[1].push_back(*cell.r2);
      }
      if (opts.margin && (*opts.margin)[slot]) {
        if (const auto f = features_for(vecs, q, k, opts.features)) {
          cell.margin_prediction = predict_margin(*(*opts.margin)[slot], *f);
          cell.r3 = risk_classified(costs, *cell.margin_prediction);
          by_variant[2].push_back(*cell.r3);
        }
      }
      r.cells.push_back(std::move(cell));
    }
  }
  if (r.cells.empty())
    throw InvalidArgument("subject '" + subject + "' has no cell with both traveler and landscape scores");

  for (std::size_t v = 0; v < 3; ++v)
    if (!by_variant[v].empty()) r.variant_average[v] = mean_risk(by_variant[v]);
  const auto& headline = r.variant_average[static_cast<std::size_t>(r.headline)];
  if (!headline) throw InvalidArgument("no cell produced a " + std::string(to_string(r.headline)) + " value");
  r.average_risk = *headline;
  r.level = risk_level(std::clamp(r.average_risk, 0.0, 1.0), opts.thresholds);
  return r;
}

}  // namespace watchlist
