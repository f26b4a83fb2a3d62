#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "watchlist/classify.hpp"
#include "watchlist/landscape.hpp"
#include "watchlist/metrics.hpp"
#include "watchlist/scores.hpp"

namespace watchlist {

enum class Classifier { Margin, MinRule };

std::string_view to_string(Classifier c);
Classifier parse_classifier(std::string_view s);

struct EvalConfig {
  LandscapeParams landscape;
  MarginHyper margin;
  FeatureMode features = FeatureMode::PerKind;
  /// Fold-level parallelism; Serial is the reference path.
  Execution exec = Execution::Parallel;
};

/// Index of a (quality, kind) slot in per-subject tables.
constexpr std::size_t slot_index(ComparisonQuality q, ComparisonKind k) {
  return index(k) * 3 + index(q);
}

/// Per-subject dissimilarity vectors, each computed against a landscape
/// rebuilt without that subject (assignment and pooling both recomputed).
struct LooFeatureTable {
  std::vector<SubjectId> subjects;
  std::vector<DrcCategory> truth;  // full-data category
  std::vector<MetricId> metrics;
  /// vectors[metric][slot][subject]; nullopt when the subject has no
  /// scores in the slot or a fold cell was empty.
  std::vector<std::array<std::vector<std::optional<DissimilarityVector>>, 6>> vectors;
  /// Subjects with a non-empty score slice per slot.
  std::array<std::size_t, 6> usable{};
  /// Why a subject's slot could not be evaluated (empty when it could).
  std::array<std::vector<std::string>, 6> skip_reason;
};

LooFeatureTable compute_loo_features(const ScoreSet& s, std::span<const MetricId> metrics,
                                     std::span<const std::size_t> slots, const EvalConfig& cfg);

/// Called with the held-out position and the exact training set of that fold.
using TrainingObserver =
    std::function<void(std::size_t held_out, std::span<const FeatureVector> training)>;

/// Leave-one-out margin predictions: fold i trains on every other present
/// feature vector and predicts entry i.
std::vector<std::optional<DrcCategory>> loo_margin_predictions(
    std::span<const std::optional<FeatureVector>> features, std::span<const DrcCategory> labels,
    const MarginHyper& hyper, Execution exec, const TrainingObserver& observer = {});

struct SubjectPrediction {
  SubjectId subject;
  DrcCategory truth = DrcCategory::Sheep;
  std::optional<DrcCategory> predicted;
};

struct LoocvResult {
  std::size_t correct = 0;
  std::size_t total = 0;
  std::size_t skipped = 0;
  double sensitivity = 0.0;
  std::vector<SubjectPrediction> predictions;  // evaluated subjects only
};

/// Leave-one-out sensitivity of one classifier on one (quality, kind) cell.
/// Throws InvalidArgument when fewer than 3 subjects have scores in the cell.
LoocvResult loocv(const ScoreSet& s, MetricId metric, ComparisonQuality quality,
                  ComparisonKind kind, Classifier classifier, const EvalConfig& cfg);

struct SensitivityCell {
  MetricId metric = MetricId::Euclidean;
  Classifier classifier = Classifier::MinRule;
  ComparisonKind kind = ComparisonKind::Genuine;
  ComparisonQuality quality = ComparisonQuality::HQ;
  std::optional<double> sensitivity;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::string reason;  // set when sensitivity is empty
};

/// Cells in row-major table layout: metric, classifier, kind, quality.
struct SensitivityTable {
  std::vector<MetricId> metrics;
  std::vector<Classifier> classifiers;
  std::vector<SensitivityCell> cells;

  const SensitivityCell& at(MetricId m, Classifier c, ComparisonKind k, ComparisonQuality q) const;
  /// Mean of the filled cells matching kind (optionally one classifier).
  double mean(ComparisonKind k, std::optional<Classifier> c = std::nullopt) const;
};

SensitivityTable sensitivity_table(const ScoreSet& s, std::span<const MetricId> metrics,
                                   std::span<const Classifier> classifiers,
                                   const EvalConfig& cfg);

}  // namespace watchlist
