#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "watchlist/classify.hpp"
#include "watchlist/landscape.hpp"
#include "watchlist/metrics.hpp"
#include "watchlist/scores.hpp"

namespace watchlist {

/// Loss weight per category.
struct CostProfile {
  std::string name = "default";
  CategoryMap<double> lambda;

  /// sheep 0.1, goat 0.3, wolf_lamb 0.6.
  static CostProfile standard();
  /// Throws InvalidArgument on negative or non-finite weights.
  void validate() const;
  double total() const;
};

/// 1 - sum_j lambda(j) * d(j), clamped to [0,1].
double risk_r1(const CostProfile& c, const CategoryMap<double>& d);
inline double risk_r1(const CostProfile& c, const DissimilarityVector& d) { return risk_r1(c, d.values); }

/// Loss of the predicted category.
inline double risk_classified(const CostProfile& c, DrcCategory predicted) { return c.lambda[predicted]; }

enum class RiskLevel { Low, Medium, High };
std::string_view to_string(RiskLevel l);

struct RiskThresholds {
  double medium = 0.3;
  double high = 0.6;
};

/// Throws InvalidArgument when r is outside [0,1].
RiskLevel risk_level(double r, const RiskThresholds& t = {});

enum class RiskVariant { R1, R2, R3 };
std::string_view to_string(RiskVariant v);

/// Arithmetic mean; throws on an empty span.
double mean_risk(std::span<const double> values);

/// One margin model per (quality, kind) slot, trained for a single metric.
using MarginBank = std::array<std::optional<MarginModel>, 6>;

/// Trains the bank on every included subject of `l` other than the
/// excluded traveler, using their distributions against `l` and the
/// landscape's categories as labels. Records involving the excluded
/// subject are dropped from the training slices.
MarginBank train_margin_bank(const ScoreSet& s, const Landscape& l, MetricId metric,
                             FeatureMode mode, const MarginHyper& hyper);

struct AssessOptions {
  bool min_rule = true;
  const MarginBank* margin = nullptr;  // enables R3
  FeatureMode features = FeatureMode::PerKind;
  RiskThresholds thresholds;
};

struct RiskCell {
  ComparisonQuality quality = ComparisonQuality::HQ;
  ComparisonKind kind = ComparisonKind::Genuine;
  DissimilarityVector dissimilarity;
  double r1 = 0.0;
  std::optional<DrcCategory> min_prediction;
  std::optional<double> r2;
  std::optional<DrcCategory> margin_prediction;
  std::optional<double> r3;
};

struct RiskReport {
  SubjectId subject;
  MetricId metric = MetricId::Euclidean;
  std::vector<RiskCell> cells;
  std::vector<RiskVariant> variants;
  /// R2 when the minimum rule ran, else R3 when the margin model ran, else R1.
  RiskVariant headline = RiskVariant::R1;
  double average_risk = 0.0;  // mean of the headline variant over populated cells
  std::array<std::optional<double>, 3> variant_average;
  RiskLevel level = RiskLevel::Low;
  std::string cost_profile;
  std::uint64_t landscape_version = 0;

  std::string variant_set() const;  // e.g. "R1+R2"
};

/// Scores a traveler against a landscape built without the traveler.
RiskReport assess_traveler(const SubjectId& subject, const ScoreSet& s, const Landscape& l,
                           MetricId metric, const CostProfile& costs, const AssessOptions& opts);

}  // namespace watchlist
