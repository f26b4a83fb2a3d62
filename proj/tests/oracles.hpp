#pragma once

// Brute-force reference implementations used to derive expected values.
// They work from raw ScoreRecords and share no code paths with the library
// beyond the public value types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "watchlist/classify.hpp"
#include "watchlist/landscape.hpp"
#include "watchlist/metrics.hpp"
#include "watchlist/rng.hpp"
#include "watchlist/scores.hpp"

namespace oracle {

using namespace watchlist;

// ceil(num/den * n) in integers, clamped to [1, n].
inline std::size_t flag_count(std::size_t n, std::size_t num, std::size_t den) {
  std::size_t f = (num * n + den - 1) / den;
  return std::clamp<std::size_t>(f, 1, n);
}

struct Range {
  double lo, hi;
};

inline Range range_of(const std::vector<ScoreRecord>& rs) {
  Range r{rs.front().raw_score, rs.front().raw_score};
  for (const auto& x : rs) {
    r.lo = std::min(r.lo, x.raw_score);
    r.hi = std::max(r.hi, x.raw_score);
  }
  return r;
}

inline double norm(const Range& r, double raw) {
  return std::clamp((raw - r.lo) / (r.hi - r.lo), 0.0, 1.0);
}

inline bool touches(const ScoreRecord& r, const std::string& id) {
  return r.subject_a == id || r.subject_b == id;
}

/// Category per subject by explicit sorting of (mean, id) pairs. The
/// excluded subject is absent from the result.
inline std::map<std::string, DrcCategory> rank(const std::vector<ScoreRecord>& rs, const Range& range,
                                               double percentile,
                                               const std::optional<std::string>& exclude = {}) {
  struct Acc {
    double g = 0, i = 0;
    std::size_t gn = 0, in = 0;
  };
  std::map<std::string, Acc> acc;
  for (const auto& r : rs) {
    if (exclude) {
      acc[r.subject_a];
      acc[r.subject_b];
      if (touches(r, *exclude)) continue;
    }
    const double v = norm(range, r.raw_score);
    if (r.subject_a == r.subject_b) {
      acc[r.subject_a].g += v;
      ++acc[r.subject_a].gn;
    } else {
      acc[r.subject_a].i += v;
      ++acc[r.subject_a].in;
      acc[r.subject_b].i += v;
      ++acc[r.subject_b].in;
    }
  }
  std::map<std::string, DrcCategory> out;
  std::vector<std::pair<double, std::string>> imp, gen;
  for (const auto& [id, a] : acc) {
    if (exclude && id == *exclude) continue;
    out[id] = DrcCategory::Sheep;
    if (a.gn == 0 || a.in == 0) continue;
    imp.push_back({-(a.i / static_cast<double>(a.in)), id});
    gen.push_back({a.g / static_cast<double>(a.gn), id});
  }
  std::sort(imp.begin(), imp.end());
  std::sort(gen.begin(), gen.end());
  const std::size_t f = static_cast<std::size_t>(std::ceil(percentile * imp.size() - 1e-9));
  const std::size_t k = std::clamp<std::size_t>(f, 1, imp.size());
  for (std::size_t j = 0; j < k; ++j) out[imp[j].second] = DrcCategory::WolfLamb;
  std::size_t goats = 0;
  for (const auto& [m, id] : gen) {
    if (goats == k) break;
    if (out[id] == DrcCategory::WolfLamb) continue;
    out[id] = DrcCategory::Goat;
    ++goats;
  }
  return out;
}

/// Normalized scores pooled into one (category, quality, kind) cell, in
/// record order.
inline std::vector<double> pool(const std::vector<ScoreRecord>& rs, const Range& range,
                                const std::map<std::string, DrcCategory>& cats,
                                const std::optional<std::string>& exclude, DrcCategory c,
                                ComparisonQuality q, ComparisonKind k) {
  std::vector<double> out;
  for (const auto& r : rs) {
    if (exclude && touches(r, *exclude)) continue;
    const bool genuine = r.subject_a == r.subject_b;
    if (genuine != (k == ComparisonKind::Genuine)) continue;
    if (pair_quality(r.tier_a, r.tier_b) != q) continue;
    const bool hit = cats.at(r.subject_a) == c || (!genuine && cats.at(r.subject_b) == c);
    if (hit) out.push_back(norm(range, r.raw_score));
  }
  return out;
}

/// A subject's own normalized scores in one slot, in record order.
inline std::vector<double> slice(const std::vector<ScoreRecord>& rs, const Range& range,
                                 const std::string& id, ComparisonQuality q, ComparisonKind k) {
  std::vector<double> out;
  for (const auto& r : rs) {
    if (!touches(r, id)) continue;
    if ((r.subject_a == r.subject_b) != (k == ComparisonKind::Genuine)) continue;
    if (pair_quality(r.tier_a, r.tier_b) != q) continue;
    out.push_back(norm(range, r.raw_score));
  }
  return out;
}

/// Direct Gaussian kernel sum at bin centers, normalized.
inline std::vector<double> kernel_mass(const std::vector<double>& xs, int bins, double h) {
  std::vector<double> m(static_cast<std::size_t>(bins), 0.0);
  double total = 0;
  for (int k = 0; k < bins; ++k) {
    const double c = (k + 0.5) / bins;
    for (double x : xs) m[static_cast<std::size_t>(k)] += std::exp(-0.5 * std::pow((c - x) / h, 2));
    total += m[static_cast<std::size_t>(k)];
  }
  for (auto& v : m) v /= total;
  return m;
}

/// Random probability vector; some bins zeroed to exercise the smoothing.
inline std::vector<double> random_mass(Rng& rng, std::size_t bins, double zero_prob) {
  std::vector<double> p(bins);
  double s = 0;
  for (auto& x : p) {
    x = rng.uniform() < zero_prob ? 0.0 : -std::log(1.0 - rng.uniform());
    s += x;
  }
  if (s == 0) {
    p[rng.below(bins)] = 1.0;
    return p;
  }
  for (auto& x : p) x /= s;
  return p;
}

inline ScoreDistribution as_distribution(const std::vector<double>& mass) {
  ScoreDistribution d;
  d.mass = mass;
  d.bin_edges = uniform_bin_edges(static_cast<int>(mass.size()));
  d.sample_count = 1;
  return d;
}

/// Argmin over goat, wolf_lamb, sheep written out explicitly.
inline DrcCategory argmin(const DissimilarityVector& v) {
  const double g = v[DrcCategory::Goat], w = v[DrcCategory::WolfLamb], s = v[DrcCategory::Sheep];
  if (w <= g && w <= s) return DrcCategory::WolfLamb;
  if (g <= s) return DrcCategory::Goat;
  return DrcCategory::Sheep;
}

}  // namespace oracle
