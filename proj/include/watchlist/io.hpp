#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "watchlist/classify.hpp"
#include "watchlist/evaluate.hpp"
#include "watchlist/landscape.hpp"
#include "watchlist/risk.hpp"
#include "watchlist/synth.hpp"

namespace watchlist {

/// Stamped on every output file.
struct Provenance {
  std::string config_hash;
  std::optional<std::uint64_t> landscape_version;
};

/// `# tool=watchlist 0.1.0 config=<hash>[ landscape_version=<v>]`
std::string provenance_comment(const Provenance& p);
nlohmann::json provenance_json(const Provenance& p);

/// Six-decimal fixed-point formatting used by every CSV.
std::string fixed6(double v);

// Landscape document ------------------------------------------------------

nlohmann::json landscape_to_json(const Landscape& l, const Provenance& p);

/// The parts of a landscape export needed to re-plot it.
struct LandscapeDoc {
  std::uint64_t version = 0;
  double percentile = 0.0;
  CategoryMap<double> proportions;
  std::vector<double> bin_edges;
  std::array<ScoreDistribution, kCellCount> cells;
};

/// Validates structure (18 cells, consistent grids); throws InvalidArgument.
LandscapeDoc landscape_from_json(const nlohmann::json& j);

/// `category,quality,kind,bin_center,mass`; empty cells become a comment.
void write_plotdata_csv(std::ostream& out, const LandscapeDoc& doc, const Provenance& p);

/// `subject,category,mean_genuine,mean_impostor`
void write_assignment_csv(std::ostream& out, const DrcAssignment& a, const Provenance& p);

/// One-line category proportions for humans.
std::string proportions_table(const CategoryMap<double>& proportions);

// Metrics -----------------------------------------------------------------

/// `metric,quality,kind,goat,wolf_lamb,sheep`
void write_metric_grid_csv(std::ostream& out, std::span<const DissimilarityVector> grid,
                           const Provenance& p);

// Sensitivity -------------------------------------------------------------

/// One row per metric, one column per classifier:kind:quality, two decimals.
void write_sensitivity_csv(std::ostream& out, const SensitivityTable& t, const Provenance& p);
nlohmann::json sensitivity_to_json(const SensitivityTable& t, const Provenance& p);

// Models, costs, reports, truth -------------------------------------------

nlohmann::json model_to_json(const MarginModel& m);
MarginModel model_from_json(const nlohmann::json& j);

nlohmann::json cost_profile_to_json(const CostProfile& c);
/// `{name, lambda: {sheep, goat, wolf_lamb}}`
CostProfile cost_profile_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const RiskReport& r, const Provenance& p);
inline constexpr const char* kSummaryHeader = "subject,avg_risk,level,variant_set,landscape_version";
std::string report_summary_line(const RiskReport& r);

nlohmann::json truth_to_json(const SynthTruth& t);

}  // namespace watchlist
