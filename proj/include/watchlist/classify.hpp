#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "watchlist/metrics.hpp"
#include "watchlist/types.hpp"

namespace watchlist {

/// Dissimilarities to (goat, wolf_lamb, sheep); six entries when the
/// genuine and impostor triples are concatenated.
struct FeatureVector {
  std::vector<double> values;
  MetricId metric = MetricId::Euclidean;
  ComparisonQuality quality = ComparisonQuality::HQ;
};

enum class FeatureMode { PerKind, Combined };

FeatureVector make_features(const DissimilarityVector& v);
FeatureVector make_features(const DissimilarityVector& genuine, const DissimilarityVector& impostor);

/// Category with the smallest dissimilarity; ties go to the higher-cost
/// category.
DrcCategory min_rule(const DissimilarityVector& v);

struct MarginHyper {
  double lambda = 1e-3;
  int epochs = 200;
  std::uint64_t seed = 1;
};

/// One-vs-rest linear max-margin classifier.
struct MarginModel {
  CategoryMap<std::vector<double>> weights;
  CategoryMap<double> bias{};
  MarginHyper hyper;
  /// Mean regularized hinge objective of the kept iterate after each epoch.
  std::vector<double> loss_history;

  std::size_t feature_length() const { return weights[DrcCategory::Sheep].size(); }
  CategoryMap<double> scores(std::span<const double> f) const;
};

/// Trains each one-vs-rest hinge classifier by stochastic subgradient
/// descent (step 1/(lambda t), seeded sample order, bias folded in as a
/// constant feature). The best iterate seen at an epoch boundary is kept.
MarginModel train_margin(std::span<const FeatureVector> features,
                         std::span<const DrcCategory> labels, const MarginHyper& hyper = {});

DrcCategory predict_margin(const MarginModel& m, const FeatureVector& f);

}  // namespace watchlist
