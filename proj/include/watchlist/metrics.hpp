#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "watchlist/landscape.hpp"
#include "watchlist/types.hpp"

namespace watchlist {

enum class MetricId {
  Euclidean,
  CityBlock,
  Chebyshev,
  Sorensen,
  Canberra,
  Lorentzian,
  WaveHedges,
  Czekanowski,
  KulczynskiS,
  HarmonicMean,
  KumarHassebrook,
  Jaccard,
  Hellinger,
  Matusita,
  SquaredChord,
  SquaredEuclidean,
  SquaredChiSquare,
  Clark,
  KullbackLeibler,
  KDivergence,
  JensenShannon,
};

inline constexpr std::size_t kMetricCount = 21;

/// All metrics in table order.
const std::array<MetricId, kMetricCount>& all_metrics();

/// snake_case identifier used in every export.
std::string_view to_string(MetricId m);
MetricId parse_metric(std::string_view name);

enum class MeasureKind { Distance, Similarity };

struct MetricInfo {
  MeasureKind kind;
  bool symmetric;
  bool smoothed;  // evaluated on epsilon-smoothed mass
};

MetricInfo metric_info(MetricId m);

/// Smoothing constant added to every bin before ratio and log metrics.
inline constexpr double kSmoothingEpsilon = 1e-12;

/// Raw metric value on two mass vectors of equal length. Similarity metrics
/// return the similarity itself. No validation; see raw_measure.
double raw_measure_mass(MetricId m, std::span<const double> p, std::span<const double> q);

/// Raw measure between two non-empty distributions on the same grid.
double raw_measure(MetricId m, const ScoreDistribution& p, const ScoreDistribution& q);

/// Maps a raw value onto [0,1], 0 meaning identical.
double to_dissimilarity(MetricId m, double raw, std::size_t bins);

double dissimilarity(MetricId m, const ScoreDistribution& p, const ScoreDistribution& q);

/// Dissimilarity of a traveler's distribution to each category cell.
struct DissimilarityVector {
  CategoryMap<double> values;
  MetricId metric = MetricId::Euclidean;
  ComparisonQuality quality = ComparisonQuality::HQ;
  ComparisonKind kind = ComparisonKind::Genuine;

  double operator[](DrcCategory c) const { return values[c]; }
};

/// Throws InvalidArgument naming the cell when a landscape cell is empty.
DissimilarityVector dissimilarity_vector(MetricId m, const ScoreDistribution& traveler,
                                         const Landscape& l, ComparisonQuality quality,
                                         ComparisonKind kind);

/// Every metric's dissimilarity vector for one (quality, kind) cell,
/// evaluated with the OpenMP kernel or serially.
std::vector<DissimilarityVector> metric_sweep(std::span<const MetricId> metrics,
                                              const ScoreDistribution& traveler,
                                              const Landscape& l, ComparisonQuality quality,
                                              ComparisonKind kind,
                                              Execution exec = Execution::Parallel);

}  // namespace watchlist
