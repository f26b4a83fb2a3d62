#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "watchlist/landscape.hpp"
#include "watchlist/scores.hpp"
#include "watchlist/types.hpp"

namespace watchlist {

struct ScoreModel {
  double mean = 0.5;
  double sd = 0.1;
};

/// Parameters of the planted-category score generator. Means and standard
/// deviations are on the normalized [0,1] score axis.
struct SynthConfig {
  std::size_t n_subjects = 200;
  double goat_frac = 0.025;
  double wolf_frac = 0.025;
  std::size_t samples_per_tier = 4;
  /// Genuine score model per planted category (high-quality pairs).
  CategoryMap<ScoreModel> genuine{{ScoreModel{0.80, 0.08}, ScoreModel{0.35, 0.10},
                                   ScoreModel{0.90, 0.05}}};
  ScoreModel impostor{0.15, 0.08};
  /// Impostor pairs that involve a planted wolf/lamb.
  ScoreModel impostor_elevated{0.55, 0.10};
  /// Genuine mean shift and sd inflation for low-low pairs; mixed pairs get
  /// half the shift and half the extra spread.
  double low_tier_shift = 0.15;
  double low_tier_sd_scale = 1.5;
  std::uint64_t seed = 1;

  /// Throws InvalidArgument.
  void validate() const;
  std::size_t planted_goats() const;
  std::size_t planted_wolves() const;
};

struct SynthTruth {
  std::vector<std::pair<SubjectId, DrcCategory>> planted;  // sorted by id
  SynthConfig config;

  DrcCategory category(const SubjectId& id) const;
  std::size_t count(DrcCategory c) const;
};

struct SynthOutput {
  ScoreSet scores;
  SynthTruth truth;
};

/// Deterministic in the config (seed included). Scores are clamped to
/// [0,1] and rounded to six decimals so the CSV form is lossless.
SynthOutput generate(const SynthConfig& cfg);

struct RecoveryReport {
  CategoryMap<std::size_t> planted{};
  CategoryMap<std::size_t> recovered{};
  /// recovered / planted; empty when nothing was planted.
  CategoryMap<std::optional<double>> sensitivity;
  double accuracy = 0.0;
};

/// Compares an assignment with the planted truth over the same subjects.
RecoveryReport oracle_check(const SynthTruth& truth, const DrcAssignment& a);

}  // namespace watchlist
