#include "watchlist/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "watchlist/error.hpp"
#include "watchlist/rng.hpp"

namespace watchlist {

namespace {

void check_model(const ScoreModel& m, const char* what) {
  if (!(m.mean >= 0.0 && m.mean <= 1.0))
    throw InvalidArgument(std::string(what) + " mean must lie in [0,1]");
  if (!(m.sd > 0.0) || !std::isfinite(m.sd))
    throw InvalidArgument(std::string(what) + " sd must be > 0");
}

double draw(Rng& rng, double mean, double sd) {
  const double x = std::clamp(rng.normal(mean, sd), 0.0, 1.0);
  return std::round(x * 1e6) / 1e6;
}

std::string subject_name(std::size_t i, std::size_t n) {
  const auto width = std::to_string(n).size();
  auto digits = std::to_string(i + 1);
  return "S" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_subjects < 4) throw InvalidArgument("synthetic set needs at least 4 subjects");
  if (!(goat_frac >= 0.0) || !(wolf_frac >= 0.0))
    throw InvalidArgument("planted fractions must be >= 0");
  if (!(goat_frac + wolf_frac < 0.5))
    throw InvalidArgument("goat_frac + wolf_frac must be < 0.5");
  if (samples_per_tier < 2) throw InvalidArgument("samples_per_tier must be >= 2");
  for (const auto c : kCategories) check_model(genuine[c], "genuine");
  check_model(impostor, "impostor");
  check_model(impostor_elevated, "elevated impostor");
  if (!(low_tier_shift >= 0.0 && low_tier_shift <= 1.0))
    throw InvalidArgument("low_tier_shift must lie in [0,1]");
  if (!(low_tier_sd_scale >= 1.0)) throw InvalidArgument("low_tier_sd_scale must be >= 1");
}

std::size_t SynthConfig::planted_goats() const {
  return static_cast<std::size_t>(std::lround(goat_frac * static_cast<double>(n_subjects)));
}

std::size_t SynthConfig::planted_wolves() const {
  return static_cast<std::size_t>(std::lround(wolf_frac * static_cast<double>(n_subjects)));
}

DrcCategory SynthTruth::category(const SubjectId& id) const {
  const auto it = std::lower_bound(planted.begin(), planted.end(), id,
                                   [](const auto& p, const SubjectId& v) { return p.first < v; });
  if (it == planted.end() || it->first != id) throw UnknownSubject(id);
  return it->second;
}

std::size_t SynthTruth::count(DrcCategory c) const {
  return static_cast<std::size_t>(
      std::count_if(planted.begin(), planted.end(), [c](const auto& p) { return p.second == c; }));
}

SynthOutput generate(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const auto n = cfg.n_subjects;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<DrcCategory> planted(n, DrcCategory::Sheep);
  const auto goats = cfg.planted_goats();
  const auto wolves = cfg.planted_wolves();
  for (std::size_t k = 0; k < goats; ++k) planted[order[k]] = DrcCategory::Goat;
  for (std::size_t k = goats; k < goats + wolves; ++k) planted[order[k]] = DrcCategory::WolfLamb;

  std::vector<SubjectId> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = subject_name(i, n);

  const auto s = cfg.samples_per_tier;
  std::vector<ScoreRecord> records;
  records.reserve(n * (s * (s - 1) + s * s) + n * (n - 1) / 2 * 3);

  // Genuine: every pair of distinct samples of one subject.
  for (std::size_t i = 0; i < n; ++i) {
    const auto base = cfg.genuine[planted[i]];
    const std::size_t total = 2 * s;
    for (std::size_t x = 0; x < total; ++x) {
      for (std::size_t y = x + 1; y < total; ++y) {
        const auto ta = x < s ? QualityTier::High : QualityTier::Low;
        const auto tb = y < s ? QualityTier::High : QualityTier::Low;
        double mean = base.mean;
        double sd = base.sd;
        const int lows = (ta == QualityTier::Low) + (tb == QualityTier::Low);
        if (lows == 2) {
          mean -= cfg.low_tier_shift;
          sd *= cfg.low_tier_sd_scale;
        } else if (lows == 1) {
          mean -= 0.5 * cfg.low_tier_shift;
          sd *= 0.5 * (1.0 + cfg.low_tier_sd_scale);
        }
        records.push_back({names[i], names[i], ta, tb, draw(rng, mean, sd), std::nullopt, std::nullopt});
      }
    }
  }

  // Impostor: one comparison per subject pair and tier pairing.
  constexpr std::array<std::pair<QualityTier, QualityTier>, 3> kPairings{
      std::pair{QualityTier::High, QualityTier::High}, std::pair{QualityTier::Low, QualityTier::Low},
      std::pair{QualityTier::High, QualityTier::Low}};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const bool elevated =
          planted[a] == DrcCategory::WolfLamb || planted[b] == DrcCategory::WolfLamb;
      const auto& m = elevated ? cfg.impostor_elevated : cfg.impostor;
      for (const auto& [ta, tb] : kPairings)
        records.push_back({names[a], names[b], ta, tb, draw(rng, m.mean, m.sd), std::nullopt, std::nullopt});
    }
  }

  SynthTruth truth;
  truth.config = cfg;
  for (std::size_t i = 0; i < n; ++i) truth.planted.emplace_back(names[i], planted[i]);
  return {ScoreSet::from_records(std::move(records)), std::move(truth)};
}

RecoveryReport oracle_check(const SynthTruth& truth, const DrcAssignment& a) {
  std::vector<SubjectId> included;
  for (std::size_t i = 0; i < a.subjects.size(); ++i)
    if (a.entries[i].included) included.push_back(a.subjects[i]);
  if (included.size() != truth.planted.size() ||
      !std::equal(included.begin(), included.end(), truth.planted.begin(),
                  [](const auto& id, const auto& p) { return id == p.first; }))
    throw InvalidArgument("truth and assignment cover different subjects");

  RecoveryReport r;
  std::size_t correct = 0;
  for (const auto& [id, cat] : truth.planted) {
    ++r.planted[cat];
    if (a.category(id) == cat) {
      ++r.recovered[cat];
      ++correct;
    }
  }
  for (const auto c : kCategories)
    if (r.planted[c]) r.sensitivity[c] = static_cast<double>(r.recovered[c]) / static_cast<double>(r.planted[c]);
  r.accuracy = static_cast<double>(correct) / static_cast<double>(truth.planted.size());
  return r;
}

}  // namespace watchlist
