#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "watchlist/types.hpp"

namespace watchlist {

/// One matcher output: two samples, their tiers, and the raw score.
struct ScoreRecord {
  SubjectId subject_a;
  SubjectId subject_b;
  QualityTier tier_a = QualityTier::High;
  QualityTier tier_b = QualityTier::High;
  double raw_score = 0.0;
  std::optional<std::string> sample_a;
  std::optional<std::string> sample_b;

  ComparisonKind kind() const {
    return subject_a == subject_b ? ComparisonKind::Genuine : ComparisonKind::Impostor;
  }
  ComparisonQuality quality() const { return pair_quality(tier_a, tier_b); }

  bool operator==(const ScoreRecord&) const = default;
};

/// A tokenized input row before validation.
struct ScoreRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Immutable, indexed collection of score records.
///
/// Subjects are kept sorted; records are additionally stored in a compact
/// form (subject indices plus normalized score) that the landscape and
/// evaluation code iterate over.
class ScoreSet {
 public:
  struct Entry {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    ComparisonKind kind = ComparisonKind::Genuine;
    ComparisonQuality quality = ComparisonQuality::HQ;
    double score = 0.0;  // normalized to [0,1]

    bool involves(std::uint32_t s) const { return a == s || b == s; }
  };

  /// Builds a set whose normalization range is the observed extrema.
  /// Throws EmptySet for no records and InvalidArgument for bad records.
  static ScoreSet from_records(std::vector<ScoreRecord> records);

  const std::vector<ScoreRecord>& records() const { return records_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<SubjectId>& subjects() const { return subjects_; }
  std::size_t size() const { return records_.size(); }
  std::size_t subject_count() const { return subjects_.size(); }

  double norm_min() const { return norm_min_; }
  double norm_max() const { return norm_max_; }
  bool has_range() const { return norm_min_ < norm_max_; }
  /// Throws InvalidArgument when every raw score is identical.
  void require_range() const;

  std::optional<std::uint32_t> find(const SubjectId& id) const;
  /// Throws UnknownSubject.
  std::uint32_t index_of(const SubjectId& id) const;
  bool contains(const SubjectId& id) const { return find(id).has_value(); }

  bool operator==(const ScoreSet& other) const { return records_ == other.records_; }

 private:
  std::vector<ScoreRecord> records_;
  std::vector<Entry> entries_;
  std::vector<SubjectId> subjects_;
  double norm_min_ = 0.0;
  double norm_max_ = 0.0;
};

/// Validates parsed rows (5 fields, or 7 with sample ids) into a ScoreSet.
ScoreSet ingest_scores(std::span<const ScoreRow> rows);

/// Min-max normalization, clamped to [0,1].
double normalize_score(const ScoreSet& s, double raw);

std::pair<ComparisonKind, ComparisonQuality> classify_comparison(const ScoreRecord& r);

/// Normalized scores of every record involving one subject, split by
/// [kind][quality].
struct SubjectSlices {
  std::array<std::array<std::vector<double>, 3>, 2> scores;

  std::vector<double>& at(ComparisonKind k, ComparisonQuality q) {
    return scores[index(k)][index(q)];
  }
  const std::vector<double>& at(ComparisonKind k, ComparisonQuality q) const {
    return scores[index(k)][index(q)];
  }
  std::size_t total() const;
};

SubjectSlices subject_score_slices(const ScoreSet& s, const SubjectId& subject);

struct GateConfig {
  double min_mean_genuine = 0.2;
  std::size_t min_genuine_count = 2;
};

enum class GateReason { None, InsufficientSamples, LowMeanGenuine };

struct GateVerdict {
  bool pass = true;
  GateReason reason = GateReason::None;
  double mean_genuine = 0.0;
  std::size_t genuine_count = 0;
};

std::string_view to_string(GateReason r);

/// Score-level quality control for one enrolled entry.
GateVerdict quality_gate(const ScoreSet& s, const SubjectId& entry,
                         const GateConfig& cfg = {});

// Score CSV: header `subject_a,subject_b,tier_a,tier_b,score[,sample_a,sample_b]`.
std::vector<ScoreRow> parse_score_csv(std::istream& in);
ScoreSet read_score_csv(const std::string& path);
void write_score_csv(std::ostream& out, std::span<const ScoreRecord> records);

}  // namespace watchlist
