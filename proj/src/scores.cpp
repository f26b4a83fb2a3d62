#include "watchlist/scores.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "watchlist/error.hpp"

namespace watchlist {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value, std::chars_format::general);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

ScoreSet ScoreSet::from_records(std::vector<ScoreRecord> records) {
  if (records.empty()) throw EmptySet();

  ScoreSet set;
  set.norm_min_ = records.front().raw_score;
  set.norm_max_ = records.front().raw_score;
  for (const auto& r : records) {
    if (r.subject_a.empty() || r.subject_b.empty())
      throw InvalidArgument("score record with empty subject id");
    if (!std::isfinite(r.raw_score)) throw InvalidArgument("non-finite raw score");
    set.norm_min_ = std::min(set.norm_min_, r.raw_score);
    set.norm_max_ = std::max(set.norm_max_, r.raw_score);
    set.subjects_.push_back(r.subject_a);
    set.subjects_.push_back(r.subject_b);
  }
  std::sort(set.subjects_.begin(), set.subjects_.end());
  set.subjects_.erase(std::unique(set.subjects_.begin(), set.subjects_.end()),
                      set.subjects_.end());

  set.records_ = std::move(records);
  set.entries_.reserve(set.records_.size());
  const double span = set.norm_max_ - set.norm_min_;
  for (const auto& r : set.records_) {
    Entry e;
    e.a = *set.find(r.subject_a);
    e.b = *set.find(r.subject_b);
    e.kind = r.kind();
    e.quality = r.quality();
    e.score = span > 0.0 ? std::clamp((r.raw_score - set.norm_min_) / span, 0.0, 1.0)
                         : std::nan("");
    set.entries_.push_back(e);
  }
  return set;
}

void ScoreSet::require_range() const {
  if (!has_range())
    throw InvalidArgument("degenerate score range: all raw scores are identical");
}

std::optional<std::uint32_t> ScoreSet::find(const SubjectId& id) const {
  const auto it = std::lower_bound(subjects_.begin(), subjects_.end(), id);
  if (it == subjects_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - subjects_.begin());
}

std::uint32_t ScoreSet::index_of(const SubjectId& id) const {
  const auto i = find(id);
  if (!i) throw UnknownSubject(id);
  return *i;
}

ScoreSet ingest_scores(std::span<const ScoreRow> rows) {
  std::vector<ScoreRecord> records;
  records.reserve(rows.size());
  for (const auto& row : rows) {
    const auto& f = row.fields;
    if (f.size() != 5 && f.size() != 7)
      throw RowError(row.line, "expected 5 or 7 fields, got " + std::to_string(f.size()));
    ScoreRecord r;
    r.subject_a = f[0];
    r.subject_b = f[1];
    if (r.subject_a.empty() || r.subject_b.empty())
      throw RowError(row.line, "missing subject id");
    try {
      r.tier_a = parse_tier(f[2]);
      r.tier_b = parse_tier(f[3]);
    } catch (const InvalidArgument& e) {
      throw RowError(row.line, e.what());
    }
    const auto score = parse_decimal(f[4]);
    if (!score) throw RowError(row.line, "score '" + f[4] + "' is not a finite decimal");
    r.raw_score = *score;
    if (f.size() == 7) {
      if (!f[5].empty()) r.sample_a = f[5];
      if (!f[6].empty()) r.sample_b = f[6];
      if (r.subject_a == r.subject_b && r.sample_a && r.sample_b && *r.sample_a == *r.sample_b)
        throw RowError(row.line, "sample '" + *r.sample_a + "' compared with itself");
    }
    records.push_back(std::move(r));
  }
  return ScoreSet::from_records(std::move(records));
}

double normalize_score(const ScoreSet& s, double raw) {
  s.require_range();
  return std::clamp((raw - s.norm_min()) / (s.norm_max() - s.norm_min()), 0.0, 1.0);
}

std::pair<ComparisonKind, ComparisonQuality> classify_comparison(const ScoreRecord& r) {
  return {r.kind(), r.quality()};
}

std::size_t SubjectSlices::total() const {
  std::size_t n = 0;
  for (const auto& by_kind : scores)
    for (const auto& v : by_kind) n += v.size();
  return n;
}

SubjectSlices subject_score_slices(const ScoreSet& s, const SubjectId& subject) {
  const auto id = s.index_of(subject);
  s.require_range();
  SubjectSlices out;
  for (const auto& e : s.entries())
    if (e.involves(id)) out.at(e.kind, e.quality).push_back(e.score);
  return out;
}

std::string_view to_string(GateReason r) {
  switch (r) {
    case GateReason::None: return "none";
    case GateReason::InsufficientSamples: return "insufficient genuine samples";
    case GateReason::LowMeanGenuine: return "low mean genuine score";
  }
  return "?";
}

GateVerdict quality_gate(const ScoreSet& s, const SubjectId& entry, const GateConfig& cfg) {
  const auto id = s.index_of(entry);
  s.require_range();
  GateVerdict v;
  double sum = 0.0;
  for (const auto& e : s.entries()) {
    if (e.kind == ComparisonKind::Genuine && e.a == id) {
      sum += e.score;
      ++v.genuine_count;
    }
  }
  v.mean_genuine = v.genuine_count ? sum / static_cast<double>(v.genuine_count) : 0.0;
  if (v.genuine_count < cfg.min_genuine_count) {
    v.pass = false;
    v.reason = GateReason::InsufficientSamples;
  } else if (v.mean_genuine < cfg.min_mean_genuine) {
    v.pass = false;
    v.reason = GateReason::LowMeanGenuine;
  }
  return v;
}

std::vector<ScoreRow> parse_score_csv(std::istream& in) {
  std::vector<ScoreRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = split_csv(t);
    if (!have_header) {
      static const std::vector<std::string> kBase{"subject_a", "subject_b", "tier_a",
                                                  "tier_b", "score"};
      const bool base_ok = fields.size() >= 5 && std::equal(kBase.begin(), kBase.end(), fields.begin());
      const bool ext_ok = fields.size() == 5 ||
                          (fields.size() == 7 && fields[5] == "sample_a" && fields[6] == "sample_b");
      if (!base_ok || !ext_ok)
        throw RowError(line_no,
                       "expected header 'subject_a,subject_b,tier_a,tier_b,score[,sample_a,sample_b]'");
      have_header = true;
      columns = fields.size();
      continue;
    }
    if (fields.size() != columns)
      throw RowError(line_no, "expected " + std::to_string(columns) + " fields, got " +
                                  std::to_string(fields.size()));
    rows.push_back({line_no, std::move(fields)});
  }
  return rows;
}

ScoreSet read_score_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  const auto rows = parse_score_csv(in);
  return ingest_scores(rows);
}

void write_score_csv(std::ostream& out, std::span<const ScoreRecord> records) {
  const bool with_samples = std::any_of(records.begin(), records.end(), [](const auto& r) {
    return r.sample_a.has_value() || r.sample_b.has_value();
  });
  out << "subject_a,subject_b,tier_a,tier_b,score";
  if (with_samples) out << ",sample_a,sample_b";
  out << '\n';
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.6f", r.raw_score);
    out << r.subject_a << ',' << r.subject_b << ',' << to_string(r.tier_a) << ','
        << to_string(r.tier_b) << ',' << buf;
    if (with_samples) out << ',' << r.sample_a.value_or("") << ',' << r.sample_b.value_or("");
    out << '\n';
  }
}

}  // namespace watchlist
