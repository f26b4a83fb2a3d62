#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "watchlist/kernels.hpp"
#include "watchlist/scores.hpp"
#include "watchlist/types.hpp"

namespace watchlist {

/// Binned, Gaussian-smoothed probability mass over the normalized score axis.
struct ScoreDistribution {
  std::vector<double> bin_edges;  // bins + 1 ascending edges, 0 .. 1
  std::vector<double> mass;       // bins entries, sums to 1 unless empty
  std::size_t sample_count = 0;
  double bandwidth = 0.0;

  std::size_t bins() const { return mass.size(); }
  bool empty() const { return sample_count == 0; }
  std::vector<double> centers() const;
  bool same_grid(const ScoreDistribution& other) const { return bin_edges == other.bin_edges; }
};

std::vector<double> uniform_bin_edges(int bins);

/// Silverman's rule of thumb 1.06 * sd * n^(-1/5), floored at 0.01.
double silverman_bandwidth(std::span<const double> scores);

/// Kernel bandwidth: a fixed value, or Silverman's rule per distribution.
struct BandwidthSpec {
  std::optional<double> fixed;

  static BandwidthSpec automatic() { return {}; }
  static BandwidthSpec value(double h) { return {h}; }
  bool is_auto() const { return !fixed.has_value(); }
  double resolve(std::span<const double> scores) const;
  bool operator==(const BandwidthSpec&) const = default;
};

ScoreDistribution build_distribution(std::span<const double> scores, int bins, double bandwidth,
                                     Execution exec = Execution::Parallel);
ScoreDistribution build_distribution(std::span<const double> scores, int bins,
                                     const BandwidthSpec& bandwidth,
                                     Execution exec = Execution::Parallel);

/// ceil(percentile * n), kept within [1, n]. Requires n >= 1 and
/// 0 < percentile < 0.5.
std::size_t flag_count(std::size_t n_subjects, double percentile);

struct SubjectRanking {
  DrcCategory category = DrcCategory::Sheep;
  double mean_genuine = 0.0;
  double mean_impostor = 0.0;
  std::size_t genuine_count = 0;
  std::size_t impostor_count = 0;
  bool included = true;  // false only for the excluded subject
  bool ranked = false;   // had both genuine and impostor scores
};

/// Category of every subject plus the ranking evidence.
struct DrcAssignment {
  std::vector<SubjectId> subjects;       // same order as ScoreSet::subjects()
  std::vector<SubjectRanking> entries;   // aligned with subjects
  double percentile = 0.025;
  std::size_t flagged_count = 0;
  std::size_t ranked_count = 0;
  std::optional<SubjectId> excluded;
  std::vector<SubjectId> unranked;       // subjects assigned Sheep for lack of scores

  const SubjectRanking& at(const SubjectId& id) const;
  /// Throws UnknownSubject, or InvalidArgument for the excluded subject.
  DrcCategory category(const SubjectId& id) const;
  std::size_t count(DrcCategory c) const;
  std::size_t universe() const;  // included subjects
  /// Category counts over included subjects; sums to 1.
  CategoryMap<double> proportions() const;
};

/// Ranks subjects by mean normalized genuine and impostor score. With
/// `exclude`, every record involving that subject is ignored and the
/// subject receives no category.
DrcAssignment assign_drc(const ScoreSet& s, double percentile,
                         const std::optional<SubjectId>& exclude = std::nullopt);

constexpr std::size_t kCellCount = 18;

constexpr std::size_t cell_index(DrcCategory c, ComparisonQuality q, ComparisonKind k) {
  return index(c) * 6 + index(k) * 3 + index(q);
}

struct CellKey {
  DrcCategory category;
  ComparisonQuality quality;
  ComparisonKind kind;
};

CellKey cell_key(std::size_t cell);

using CellMask = std::bitset<kCellCount>;

inline CellMask all_cells() { return CellMask{}.set(); }
/// The three category cells for one (quality, kind).
CellMask cells_for(ComparisonQuality q, ComparisonKind k);

struct LandscapeParams {
  double percentile = 0.025;
  int bins = 100;
  BandwidthSpec bandwidth;
  Execution exec = Execution::Parallel;
};

/// The 18 category x quality x kind distributions and category proportions.
struct Landscape {
  std::array<ScoreDistribution, kCellCount> cells;
  CategoryMap<double> proportions;
  DrcAssignment assignment;
  std::uint64_t version = 1;
  LandscapeParams params;
  std::optional<SubjectId> excluded;

  const ScoreDistribution& cell(DrcCategory c, ComparisonQuality q, ComparisonKind k) const {
    return cells[cell_index(c, q, k)];
  }
};

/// Pools comparisons into category cells. Genuine comparisons go to the
/// subject's category; impostor comparisons go to the category of each
/// participant (once when both share it). Records involving `exclude` are
/// dropped. Cells outside `mask` are left empty.
Landscape build_landscape(const ScoreSet& s, const DrcAssignment& a,
                          const std::optional<SubjectId>& exclude, const LandscapeParams& params,
                          const CellMask& mask = all_cells());

/// Convenience: assign_drc followed by build_landscape on the same exclusion.
Landscape build_full_landscape(const ScoreSet& s, const LandscapeParams& params,
                               const std::optional<SubjectId>& exclude = std::nullopt);

inline CategoryMap<double> landscape_proportions(const Landscape& l) { return l.proportions; }

struct AddRecords {
  std::vector<ScoreRecord> records;
};
struct ReplaceSubject {
  SubjectId subject;
  std::vector<ScoreRecord> records;
};
struct RemoveSubject {
  SubjectId subject;
};
using WatchlistMutation = std::variant<AddRecords, ReplaceSubject, RemoveSubject>;

struct MutationResult {
  ScoreSet scores;
  Landscape landscape;
};

/// Applies the mutation to a copy of `s` and recomputes the landscape from
/// scratch with `l`'s parameters; the result has version l.version + 1.
MutationResult mutate_watchlist(const Landscape& l, const ScoreSet& s, const WatchlistMutation& op);

/// Sum of absolute bin differences; empty vs empty is 0.
double mass_l1(const ScoreDistribution& a, const ScoreDistribution& b);

}  // namespace watchlist
