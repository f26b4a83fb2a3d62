#include "watchlist/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "watchlist/error.hpp"

namespace watchlist {

std::vector<double> ScoreDistribution::centers() const {
  std::vector<double> c(bins());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = 0.5 * (bin_edges[k] + bin_edges[k + 1]);
  return c;
}

std::vector<double> uniform_bin_edges(int bins) {
  if (bins < 2) throw InvalidArgument("bins must be >= 2");
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  for (int k = 0; k <= bins; ++k) edges[static_cast<std::size_t>(k)] = static_cast<double>(k) / bins;
  return edges;
}

double silverman_bandwidth(std::span<const double> scores) {
  constexpr double kFloor = 0.01;
  const auto n = scores.size();
  if (n < 2) return kFloor;
  const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (const double x : scores) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return std::max(kFloor, 1.06 * sd * std::pow(static_cast<double>(n), -0.2));
}

double BandwidthSpec::resolve(std::span<const double> scores) const {
  return fixed ? *fixed : silverman_bandwidth(scores);
}

ScoreDistribution build_distribution(std::span<const double> scores, int bins, double bandwidth,
                                     Execution exec) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw InvalidArgument("bandwidth must be a positive finite number");
  for (const double x : scores) {
    if (!std::isfinite(x)) throw InvalidArgument("non-finite score in distribution input");
    if (x < 0.0 || x > 1.0) throw InvalidArgument("distribution input outside [0,1]");
  }

  ScoreDistribution d;
  d.bin_edges = uniform_bin_edges(bins);
  d.mass.assign(static_cast<std::size_t>(bins), 0.0);
  d.sample_count = scores.size();
  d.bandwidth = bandwidth;
  if (scores.empty()) return d;

  const auto centers = d.centers();
  kernels::gaussian_bin_mass(exec, scores, centers, bandwidth, d.mass);
  double total = std::accumulate(d.mass.begin(), d.mass.end(), 0.0);
  if (!(total > 0.0)) {
    // Bandwidth so narrow that every kernel underflowed: fall back to a
    // plain histogram.
    for (const double x : scores) {
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(x * bins), d.mass.size() - 1);
      d.mass[k] += 1.0;
    }
    total = static_cast<double>(scores.size());
  }
  for (auto& m : d.mass) m /= total;
  return d;
}

ScoreDistribution build_distribution(std::span<const double> scores, int bins,
                                     const BandwidthSpec& bandwidth, Execution exec) {
  return build_distribution(scores, bins, bandwidth.resolve(scores), exec);
}

std::size_t flag_count(std::size_t n_subjects, double percentile) {
  if (n_subjects < 1) throw InvalidArgument("flag_count needs at least one subject");
  if (!(percentile > 0.0 && percentile < 0.5))
    throw InvalidArgument("percentile must lie in (0, 0.5)");
  // The slack keeps products such as 0.025 * 40 from rounding up past 1.
  const double raw = std::ceil(percentile * static_cast<double>(n_subjects) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(raw), 1, n_subjects);
}

const SubjectRanking& DrcAssignment::at(const SubjectId& id) const {
  const auto it = std::lower_bound(subjects.begin(), subjects.end(), id);
  if (it == subjects.end() || *it != id) throw UnknownSubject(id);
  return entries[static_cast<std::size_t>(it - subjects.begin())];
}

DrcCategory DrcAssignment::category(const SubjectId& id) const {
  const auto& e = at(id);
  if (!e.included) throw InvalidArgument("subject '" + id + "' is excluded from this assignment");
  return e.category;
}

std::size_t DrcAssignment::count(DrcCategory c) const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [c](const auto& e) {
    return e.included && e.category == c;
  }));
}

std::size_t DrcAssignment::universe() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.included; }));
}

CategoryMap<double> DrcAssignment::proportions() const {
  CategoryMap<double> p;
  const double n = static_cast<double>(universe());
  if (n == 0) return p;
  for (const auto c : kCategories) p[c] = static_cast<double>(count(c)) / n;
  return p;
}

DrcAssignment assign_drc(const ScoreSet& s, double percentile,
                         const std::optional<SubjectId>& exclude) {
  s.require_range();
  std::optional<std::uint32_t> skip;
  if (exclude) skip = s.index_of(*exclude);

  const auto n = s.subject_count();
  std::vector<double> gsum(n, 0.0), isum(n, 0.0);
  std::vector<std::size_t> gcnt(n, 0), icnt(n, 0);
  for (const auto& e : s.entries()) {
    if (skip && e.involves(*skip)) continue;
    if (e.kind == ComparisonKind::Genuine) {
      gsum[e.a] += e.score;
      ++gcnt[e.a];
    } else {
      isum[e.a] += e.score;
      ++icnt[e.a];
      isum[e.b] += e.score;
      ++icnt[e.b];
    }
  }

  DrcAssignment out;
  out.subjects = s.subjects();
  out.entries.resize(n);
  out.percentile = percentile;
  out.excluded = exclude;
  std::vector<std::uint32_t> ranked;
  for (std::uint32_t i = 0; i < n; ++i) {
    auto& e = out.entries[i];
    e.included = !(skip && *skip == i);
    e.genuine_count = gcnt[i];
    e.impostor_count = icnt[i];
    e.mean_genuine = gcnt[i] ? gsum[i] / static_cast<double>(gcnt[i]) : 0.0;
    e.mean_impostor = icnt[i] ? isum[i] / static_cast<double>(icnt[i]) : 0.0;
    if (!e.included) continue;
    if (gcnt[i] && icnt[i]) {
      e.ranked = true;
      ranked.push_back(i);
    } else {
      out.unranked.push_back(s.subjects()[i]);
    }
  }
  if (ranked.empty())
    throw InvalidArgument("no subject has both genuine and impostor scores");

  const auto f = flag_count(ranked.size(), percentile);
  out.ranked_count = ranked.size();
  out.flagged_count = f;

  // Subject indices follow sorted id order, so index order is the
  // lexicographic tie-break.
  auto by_impostor = ranked;
  std::stable_sort(by_impostor.begin(), by_impostor.end(), [&](auto x, auto y) {
    return out.entries[x].mean_impostor > out.entries[y].mean_impostor;
  });
  for (std::size_t k = 0; k < f; ++k) out.entries[by_impostor[k]].category = DrcCategory::WolfLamb;

  auto by_genuine = ranked;
  std::stable_sort(by_genuine.begin(), by_genuine.end(), [&](auto x, auto y) {
    return out.entries[x].mean_genuine < out.entries[y].mean_genuine;
  });
  std::size_t goats = 0;
  for (const auto i : by_genuine) {
    if (goats == f) break;
    if (out.entries[i].category == DrcCategory::WolfLamb) continue;
    out.entries[i].category = DrcCategory::Goat;
    ++goats;
  }
  return out;
}

CellKey cell_key(std::size_t cell) {
  return {static_cast<DrcCategory>(cell / 6), static_cast<ComparisonQuality>(cell % 3),
          static_cast<ComparisonKind>((cell / 3) % 2)};
}

CellMask cells_for(ComparisonQuality q, ComparisonKind k) {
  CellMask m;
  for (const auto c : kCategories) m.set(cell_index(c, q, k));
  return m;
}

Landscape build_landscape(const ScoreSet& s, const DrcAssignment& a,
                          const std::optional<SubjectId>& exclude, const LandscapeParams& params,
                          const CellMask& mask) {
  s.require_range();
  if (a.subjects != s.subjects())
    throw InvalidArgument("assignment was not derived from this score set");
  std::optional<std::uint32_t> skip;
  if (exclude) skip = s.index_of(*exclude);
  if (a.excluded && a.excluded != exclude)
    throw InvalidArgument("landscape must exclude the subject the assignment excludes");

  std::array<std::vector<double>, kCellCount> pools;
  for (const auto& e : s.entries()) {
    if (skip && e.involves(*skip)) continue;
    const auto ca = a.entries[e.a].category;
    const auto cell_a = cell_index(ca, e.quality, e.kind);
    if (mask.test(cell_a)) pools[cell_a].push_back(e.score);
    if (e.kind == ComparisonKind::Impostor) {
      const auto cb = a.entries[e.b].category;
      const auto cell_b = cell_index(cb, e.quality, e.kind);
      if (cb != ca && mask.test(cell_b)) pools[cell_b].push_back(e.score);
    }
  }

  Landscape l;
  for (std::size_t c = 0; c < kCellCount; ++c)
    l.cells[c] = build_distribution(pools[c], params.bins, params.bandwidth, params.exec);
  l.assignment = a;
  l.proportions = a.proportions();
  l.params = params;
  l.params.percentile = a.percentile;
  l.excluded = exclude;
  return l;
}

Landscape build_full_landscape(const ScoreSet& s, const LandscapeParams& params,
                               const std::optional<SubjectId>& exclude) {
  const auto a = assign_drc(s, params.percentile, exclude);
  return build_landscape(s, a, exclude, params);
}

namespace {

bool involves(const ScoreRecord& r, const SubjectId& id) {
  return r.subject_a == id || r.subject_b == id;
}

std::vector<ScoreRecord> without(const ScoreSet& s, const SubjectId& id) {
  if (!s.contains(id)) throw UnknownSubject(id);
  std::vector<ScoreRecord> out;
  out.reserve(s.size());
  for (const auto& r : s.records())
    if (!involves(r, id)) out.push_back(r);
  return out;
}

}  // namespace

MutationResult mutate_watchlist(const Landscape& l, const ScoreSet& s, const WatchlistMutation& op) {
  std::vector<ScoreRecord> records;
  if (const auto* add = std::get_if<AddRecords>(&op)) {
    records = s.records();
    records.insert(records.end(), add->records.begin(), add->records.end());
  } else if (const auto* rep = std::get_if<ReplaceSubject>(&op)) {
    for (const auto& r : rep->records)
      if (!involves(r, rep->subject))
        throw InvalidArgument("replacement record does not involve '" + rep->subject + "'");
    records = without(s, rep->subject);
    records.insert(records.end(), rep->records.begin(), rep->records.end());
  } else {
    records = without(s, std::get<RemoveSubject>(op).subject);
  }

  auto scores = ScoreSet::from_records(std::move(records));
  auto landscape = build_full_landscape(scores, l.params);
  landscape.version = l.version + 1;
  return {std::move(scores), std::move(landscape)};
}

double mass_l1(const ScoreDistribution& a, const ScoreDistribution& b) {
  if (a.bins() != b.bins()) throw InvalidArgument("distributions have different bin counts");
  double d = 0.0;
  for (std::size_t k = 0; k < a.bins(); ++k) d += std::abs(a.mass[k] - b.mass[k]);
  return d;
}

}  // namespace watchlist
