#include "watchlist/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "watchlist/error.hpp"

namespace watchlist {

namespace {

constexpr std::array<MetricId, kMetricCount> kAll{
    MetricId::Euclidean,       MetricId::CityBlock,        MetricId::Chebyshev,
    MetricId::Sorensen,        MetricId::Canberra,         MetricId::Lorentzian,
    MetricId::WaveHedges,      MetricId::Czekanowski,      MetricId::KulczynskiS,
    MetricId::HarmonicMean,    MetricId::KumarHassebrook,  MetricId::Jaccard,
    MetricId::Hellinger,       MetricId::Matusita,         MetricId::SquaredChord,
    MetricId::SquaredEuclidean, MetricId::SquaredChiSquare, MetricId::Clark,
    MetricId::KullbackLeibler, MetricId::KDivergence,      MetricId::JensenShannon};

constexpr std::array<std::string_view, kMetricCount> kNames{
    "euclidean",         "city_block",         "chebyshev",     "sorensen",
    "canberra",          "lorentzian",         "wave_hedges",   "czekanowski",
    "kulczynski_s",      "harmonic_mean",      "kumar_hassebrook", "jaccard",
    "hellinger",         "matusita",           "squared_chord", "squared_euclidean",
    "squared_chi_square", "clark",             "kullback_leibler", "k_divergence",
    "jensen_shannon"};

// 0/0 terms contribute nothing.
inline double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

std::vector<double> smooth(std::span<const double> p) {
  std::vector<double> out(p.begin(), p.end());
  const double scale = 1.0 + kSmoothingEpsilon * static_cast<double>(p.size());
  for (auto& x : out) x = (x + kSmoothingEpsilon) / scale;
  return out;
}

double kdiv(std::span<const double> p, std::span<const double> q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) acc += p[i] * std::log(2.0 * p[i] / (p[i] + q[i]));
  return acc;
}

double evaluate(MetricId m, std::span<const double> p, std::span<const double> q) {
  const std::size_t n = p.size();
  double acc = 0.0;
  switch (m) {
    case MetricId::Euclidean:
      for (std::size_t i = 0; i < n; ++i) acc += (p[i] - q[i]) * (p[i] - q[i]);
      return std::sqrt(acc);
    case MetricId::CityBlock:
      for (std::size_t i = 0; i < n; ++i) acc += std::abs(p[i] - q[i]);
      return acc;
    case MetricId::Chebyshev:
      for (std::size_t i = 0; i < n; ++i) acc = std::max(acc, std::abs(p[i] - q[i]));
      return acc;
    case MetricId::Sorensen: {
      double den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += std::abs(p[i] - q[i]);
        den += p[i] + q[i];
      }
      return ratio(acc, den);
    }
    case MetricId::Canberra:
      for (std::size_t i = 0; i < n; ++i) acc += ratio(std::abs(p[i] - q[i]), p[i] + q[i]);
      return acc;
    case MetricId::Lorentzian:
      for (std::size_t i = 0; i < n; ++i) acc += std::log1p(std::abs(p[i] - q[i]));
      return acc;
    case MetricId::WaveHedges:
      for (std::size_t i = 0; i < n; ++i)
        acc += ratio(std::abs(p[i] - q[i]), std::max(p[i], q[i]));
      return acc;
    case MetricId::Czekanowski: {
      double den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += std::min(p[i], q[i]);
        den += p[i] + q[i];
      }
      return 1.0 - ratio(2.0 * acc, den);
    }
    case MetricId::KulczynskiS: {
      double den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += std::min(p[i], q[i]);
        den += std::abs(p[i] - q[i]);
      }
      return acc / std::max(den, kSmoothingEpsilon);
    }
    case MetricId::HarmonicMean:
      for (std::size_t i = 0; i < n; ++i) acc += ratio(p[i] * q[i], p[i] + q[i]);
      return 2.0 * acc;
    case MetricId::KumarHassebrook:
    case MetricId::Jaccard: {
      double pq = 0.0, pp = 0.0, qq = 0.0, diff = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        pq += p[i] * q[i];
        pp += p[i] * p[i];
        qq += q[i] * q[i];
        diff += (p[i] - q[i]) * (p[i] - q[i]);
      }
      const double den = pp + qq - pq;
      return m == MetricId::Jaccard ? ratio(diff, den) : ratio(pq, den);
    }
    case MetricId::Hellinger:
    case MetricId::Matusita:
    case MetricId::SquaredChord:
      for (std::size_t i = 0; i < n; ++i) {
        const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
        acc += d * d;
      }
      if (m == MetricId::Hellinger) return std::sqrt(2.0 * acc);
      if (m == MetricId::Matusita) return std::sqrt(acc);
      return acc;
    case MetricId::SquaredEuclidean:
      for (std::size_t i = 0; i < n; ++i) acc += (p[i] - q[i]) * (p[i] - q[i]);
      return acc;
    case MetricId::SquaredChiSquare:
      for (std::size_t i = 0; i < n; ++i) acc += ratio((p[i] - q[i]) * (p[i] - q[i]), p[i] + q[i]);
      return acc;
    case MetricId::Clark:
      for (std::size_t i = 0; i < n; ++i) {
        const double r = ratio(std::abs(p[i] - q[i]), p[i] + q[i]);
        acc += r * r;
      }
      return std::sqrt(acc);
    case MetricId::KullbackLeibler:
      for (std::size_t i = 0; i < n; ++i)
        if (p[i] > 0.0) acc += p[i] * std::log(p[i] / q[i]);
      return std::max(0.0, acc);
    case MetricId::KDivergence:
      return std::max(0.0, kdiv(p, q));
    case MetricId::JensenShannon:
      return std::max(0.0, 0.5 * (kdiv(p, q) + kdiv(q, p)));
  }
  return 0.0;
}

void check_pair(const ScoreDistribution& p, const ScoreDistribution& q) {
  if (p.empty() || q.empty()) throw InvalidArgument("metric on an empty distribution");
  if (!p.same_grid(q)) throw InvalidArgument("distributions use different bin grids");
}

}  // namespace

const std::array<MetricId, kMetricCount>& all_metrics() { return kAll; }

std::string_view to_string(MetricId m) { return kNames[static_cast<std::size_t>(m)]; }

MetricId parse_metric(std::string_view name) {
  for (std::size_t i = 0; i < kMetricCount; ++i)
    if (kNames[i] == name) return kAll[i];
  throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

MetricInfo metric_info(MetricId m) {
  MetricInfo info{MeasureKind::Distance, true, false};
  switch (m) {
    case MetricId::KulczynskiS:
    case MetricId::KumarHassebrook:
      info.kind = MeasureKind::Similarity;
      break;
    case MetricId::HarmonicMean:
      info.kind = MeasureKind::Similarity;
      info.smoothed = true;
      break;
    case MetricId::KullbackLeibler:
    case MetricId::KDivergence:
      info.symmetric = false;
      info.smoothed = true;
      break;
    case MetricId::Canberra:
    case MetricId::WaveHedges:
    case MetricId::SquaredChiSquare:
    case MetricId::Clark:
    case MetricId::JensenShannon:
      info.smoothed = true;
      break;
    default:
      break;
  }
  return info;
}

double raw_measure_mass(MetricId m, std::span<const double> p, std::span<const double> q) {
  if (metric_info(m).smoothed) {
    const auto ps = smooth(p);
    const auto qs = smooth(q);
    return evaluate(m, ps, qs);
  }
  return evaluate(m, p, q);
}

double raw_measure(MetricId m, const ScoreDistribution& p, const ScoreDistribution& q) {
  check_pair(p, q);
  return raw_measure_mass(m, p.mass, q.mass);
}

double to_dissimilarity(MetricId m, double raw, std::size_t bins) {
  const double b = static_cast<double>(bins);
  const double ln2 = std::numbers::ln2;
  double d = 0.0;
  switch (m) {
    case MetricId::Euclidean: d = raw / std::numbers::sqrt2; break;
    case MetricId::CityBlock: d = raw / 2.0; break;
    case MetricId::Chebyshev: d = raw; break;
    case MetricId::Sorensen: d = raw; break;
    case MetricId::Canberra: d = raw / b; break;
    case MetricId::Lorentzian: d = raw / (2.0 * ln2); break;
    case MetricId::WaveHedges: d = raw / b; break;
    case MetricId::Czekanowski: d = raw; break;
    case MetricId::KulczynskiS: d = 1.0 - raw / (1.0 + raw); break;
    case MetricId::HarmonicMean:
    case MetricId::KumarHassebrook: d = 1.0 - std::clamp(raw, 0.0, 1.0); break;
    case MetricId::Jaccard: d = raw; break;
    case MetricId::Hellinger: d = raw / 2.0; break;
    case MetricId::Matusita: d = raw / std::numbers::sqrt2; break;
    case MetricId::SquaredChord: d = raw / 2.0; break;
    case MetricId::SquaredEuclidean: d = raw / 2.0; break;
    case MetricId::SquaredChiSquare: d = raw / 2.0; break;
    case MetricId::Clark: d = raw / std::sqrt(b); break;
    case MetricId::KullbackLeibler: d = raw / (1.0 + raw); break;
    case MetricId::KDivergence: d = raw / ln2; break;
    case MetricId::JensenShannon: d = raw / ln2; break;
  }
  if (std::isnan(d)) return 1.0;
  return std::clamp(d, 0.0, 1.0);
}

double dissimilarity(MetricId m, const ScoreDistribution& p, const ScoreDistribution& q) {
  return to_dissimilarity(m, raw_measure(m, p, q), p.bins());
}

namespace {

void check_cells(const Landscape& l, ComparisonQuality quality, ComparisonKind kind) {
  for (const auto c : kCategories) {
    if (l.cell(c, quality, kind).empty())
      throw InvalidArgument("landscape cell " + std::string(to_string(c)) + "/" +
                            std::string(to_string(quality)) + "/" +
                            std::string(to_string(kind)) + " is empty");
  }
}

}  // namespace

DissimilarityVector dissimilarity_vector(MetricId m, const ScoreDistribution& traveler,
                                         const Landscape& l, ComparisonQuality quality,
                                         ComparisonKind kind) {
  check_cells(l, quality, kind);
  DissimilarityVector v{{}, m, quality, kind};
  for (const auto c : kCategories) v.values[c] = dissimilarity(m, traveler, l.cell(c, quality, kind));
  return v;
}

std::vector<DissimilarityVector> metric_sweep(std::span<const MetricId> metrics,
                                              const ScoreDistribution& traveler,
                                              const Landscape& l, ComparisonQuality quality,
                                              ComparisonKind kind, Execution exec) {
  check_cells(l, quality, kind);
  if (traveler.empty()) throw InvalidArgument("metric on an empty distribution");
  std::vector<DissimilarityVector> out(metrics.size());
  for (std::size_t i = 0; i < metrics.size(); ++i) out[i] = {{}, metrics[i], quality, kind};
  kernels::for_each_index(exec, metrics.size() * 3, [&](std::size_t job) {
    const auto c = kCategories[job % 3];
    auto& v = out[job / 3];
    v.values[c] = dissimilarity(v.metric, traveler, l.cell(c, quality, kind));
  });
  return out;
}

}  // namespace watchlist
