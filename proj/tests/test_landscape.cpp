#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "watchlist/error.hpp"
#include "watchlist/landscape.hpp"
#include "watchlist/rng.hpp"

using namespace watchlist;
using fixture::hh;

namespace {

std::string sid(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "P%05zu", i);
  return buf;
}

// n subjects with two genuine and two impostor records each; scores drawn
// so that means are distinct.
std::vector<ScoreRecord> ring(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ScoreRecord> rs;
  for (std::size_t i = 0; i < n; ++i) {
    rs.push_back(hh(sid(i), sid(i), 0.5 + 0.4 * rng.uniform()));
    rs.push_back(hh(sid(i), sid(i), 0.5 + 0.4 * rng.uniform()));
    rs.push_back(hh(sid(i), sid((i + 1) % n), 0.4 * rng.uniform()));
  }
  rs.push_back(hh(sid(0), sid(1 % n), 0.0));
  rs.push_back(hh(sid(0), sid(0), 1.0));
  return rs;
}

LandscapeParams serial_params() {
  LandscapeParams p;
  p.exec = Execution::Serial;
  return p;
}

}  // namespace

TEST_SUITE("landscape") {

TEST_CASE("flag count") {
  CHECK(flag_count(568, 0.025) == 15);
  CHECK(flag_count(1, 0.025) == 1);
  CHECK(flag_count(487, 0.025) == oracle::flag_count(487, 25, 1000));
  CHECK(flag_count(487, 0.025) == 13);
  CHECK(flag_count(40, 0.025) == 1);
  CHECK_THROWS_AS(flag_count(0, 0.025), InvalidArgument);
  CHECK_THROWS_AS(flag_count(10, 0.5), InvalidArgument);
  CHECK_THROWS_AS(flag_count(10, 0.0), InvalidArgument);
  for (std::size_t n = 1; n < 3000; n += 7)
    for (std::size_t permille : {10, 25, 50, 100, 250})
      CHECK(flag_count(n, permille / 1000.0) == oracle::flag_count(n, permille, 1000));
}

TEST_CASE("assignment counts at 40 and 568 subjects") {
  const auto s40 = ScoreSet::from_records(ring(40, 1));
  const auto a40 = assign_drc(s40, 0.025);
  CHECK(a40.count(DrcCategory::Goat) == 1);
  CHECK(a40.count(DrcCategory::WolfLamb) == 1);
  CHECK(a40.count(DrcCategory::Sheep) == 38);

  const auto s568 = ScoreSet::from_records(ring(568, 2));
  const auto a = assign_drc(s568, 0.025);
  CHECK(a.count(DrcCategory::Goat) == 15);
  CHECK(a.count(DrcCategory::WolfLamb) == 15);
  CHECK(a.count(DrcCategory::Sheep) == 538);
  const auto p = a.proportions();
  CHECK(std::round(p[DrcCategory::Goat] * 1e4) / 1e4 == doctest::Approx(0.0264));
  CHECK(std::round(p[DrcCategory::WolfLamb] * 1e4) / 1e4 == doctest::Approx(0.0264));
  CHECK(std::round(p[DrcCategory::Sheep] * 1e4) / 1e4 == doctest::Approx(0.9472));
}

TEST_CASE("proportions at small and LFW-sized universes") {
  const auto s4 = ScoreSet::from_records(ring(4, 3));
  const auto l4 = build_full_landscape(s4, serial_params());
  const auto p4 = landscape_proportions(l4);
  CHECK(p4[DrcCategory::Goat] == 0.25);
  CHECK(p4[DrcCategory::WolfLamb] == 0.25);
  CHECK(p4[DrcCategory::Sheep] == 0.5);

  // The ceil rule bounds the sheep proportion above by 1 - 2*percentile.
  const auto s = ScoreSet::from_records(ring(5749, 4));
  const auto p = assign_drc(s, 0.025).proportions();
  CHECK(flag_count(5749, 0.025) == 144);
  CHECK(p[DrcCategory::Sheep] == doctest::Approx(1.0 - 288.0 / 5749.0).epsilon(1e-12));
  CHECK(p[DrcCategory::Sheep] == doctest::Approx(0.949904).epsilon(1e-6));
}

TEST_CASE("planted low-genuine subject is a goat") {
  auto rs = fixture::synth(40, 9).scores.records();
  const std::string target = "S17";
  for (auto& r : rs)
    if (r.subject_a == target && r.subject_b == target) r.raw_score = 0.01;
  const auto s = ScoreSet::from_records(rs);
  const auto a = assign_drc(s, 0.025);
  const auto want = oracle::rank(rs, oracle::range_of(rs), 0.025);
  CHECK(want.at(target) == DrcCategory::Goat);
  CHECK(a.category(target) == DrcCategory::Goat);
}

TEST_CASE("assignment agrees with the sorting oracle") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto out = fixture::synth(30 + 7 * seed, seed);
    const auto& rs = out.scores.records();
    const auto range = oracle::range_of(rs);
    for (const auto& ex : {std::optional<std::string>{}, std::optional<std::string>{"S03"}}) {
      const auto a = assign_drc(out.scores, 0.05, ex);
      const auto want = oracle::rank(rs, range, 0.05, ex);
      for (const auto& [id, cat] : want) CHECK(a.category(id) == cat);
      if (ex) CHECK_THROWS_AS(a.category(*ex), InvalidArgument);
    }
  }
}

TEST_CASE("overlap rule: a subject low in genuine and high in impostor is wolf_lamb") {
  std::vector<ScoreRecord> rs;
  for (int i = 0; i < 10; ++i) {
    const auto id = sid(i);
    rs.push_back(hh(id, id, i == 0 ? 0.1 : 0.8 + 0.01 * i));
    rs.push_back(hh(id, sid((i + 1) % 10), i == 0 || i == 9 ? 0.9 : 0.1 + 0.01 * i));
  }
  const auto a = assign_drc(ScoreSet::from_records(rs), 0.05);
  // P00 has both the lowest genuine and the highest impostor mean.
  CHECK(a.category(sid(0)) == DrcCategory::WolfLamb);
  CHECK(a.category(sid(1)) == DrcCategory::Goat);
  CHECK(a.count(DrcCategory::Goat) == 1);
  CHECK(a.count(DrcCategory::WolfLamb) == 1);
}

TEST_CASE("distribution of a single score peaks at its bin") {
  for (double h : {0.005, 0.05, 0.3}) {
    const std::vector<double> xs{0.5};
    const auto d = build_distribution(xs, 100, h);
    const auto k = std::max_element(d.mass.begin(), d.mass.end()) - d.mass.begin();
    CHECK((k == 49 || k == 50));
  }
  const std::vector<double> x{0.437};
  const auto d = build_distribution(x, 50, 0.01);
  CHECK(std::max_element(d.mass.begin(), d.mass.end()) - d.mass.begin() == 21);
}

TEST_CASE("empty distribution") {
  const auto d = build_distribution(std::span<const double>{}, 100, 0.02);
  CHECK(d.empty());
  CHECK(d.bins() == 100);
  CHECK(std::all_of(d.mass.begin(), d.mass.end(), [](double m) { return m == 0.0; }));
}

TEST_CASE("bimodal distribution matches the direct kernel sum") {
  std::vector<double> xs(100, 0.205);
  xs.insert(xs.end(), 100, 0.805);
  const auto d = build_distribution(xs, 100, 0.02);
  const auto want = oracle::kernel_mass(xs, 100, 0.02);
  for (std::size_t k = 0; k < 100; ++k) CHECK(d.mass[k] == doctest::Approx(want[k]).epsilon(1e-12));
  CHECK(std::accumulate(d.mass.begin(), d.mass.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
  std::vector<std::size_t> peaks;
  for (std::size_t k = 1; k + 1 < 100; ++k)
    if (d.mass[k] > 1e-6 && d.mass[k] >= d.mass[k - 1] && d.mass[k] >= d.mass[k + 1]) peaks.push_back(k);
  REQUIRE(peaks.size() == 2);
  CHECK(std::abs(static_cast<int>(peaks[0]) - 20) <= 1);
  CHECK(std::abs(static_cast<int>(peaks[1]) - 80) <= 1);
}

TEST_CASE("distribution preconditions") {
  const std::vector<double> bad{0.5, 1.2};
  CHECK_THROWS_AS(build_distribution(bad, 100, 0.02), InvalidArgument);
  const std::vector<double> ok{0.5};
  CHECK_THROWS_AS(build_distribution(ok, 1, 0.02), InvalidArgument);
  CHECK_THROWS_AS(build_distribution(ok, 100, 0.0), InvalidArgument);
  CHECK_THROWS_AS(build_distribution(ok, 100, -1.0), InvalidArgument);
}

TEST_CASE("very narrow bandwidth keeps unit mass") {
  const std::vector<double> xs{0.123, 0.777};
  const auto d = build_distribution(xs, 100, 1e-6);
  CHECK(std::accumulate(d.mass.begin(), d.mass.end(), 0.0) == doctest::Approx(1.0));
  CHECK(d.mass[12] == doctest::Approx(0.5));
  CHECK(d.mass[77] == doctest::Approx(0.5));
}

TEST_CASE("goat cell holds exactly the goats' genuine HQ comparisons") {
  const auto out = fixture::synth(60, 4);
  const auto& rs = out.scores.records();
  const auto range = oracle::range_of(rs);
  const auto cats = oracle::rank(rs, range, 0.025);
  const auto l = build_full_landscape(out.scores, serial_params());
  for (std::size_t c = 0; c < kCellCount; ++c) {
    const auto key = cell_key(c);
    CHECK(cell_index(key.category, key.quality, key.kind) == c);
    const auto pooled = oracle::pool(rs, range, cats, {}, key.category, key.quality, key.kind);
    CHECK(l.cells[c].sample_count == pooled.size());
    const auto ref = build_distribution(pooled, 100, BandwidthSpec{}, Execution::Serial);
    CHECK(l.cells[c].mass == ref.mass);
  }
}

TEST_CASE("all-sheep assignment leaves flagged cells empty") {
  const auto s = ScoreSet::from_records(ring(12, 8));
  auto a = assign_drc(s, 0.025);
  for (auto& e : a.entries) e.category = DrcCategory::Sheep;
  const auto l = build_landscape(s, a, std::nullopt, serial_params());
  for (const auto q : kQualities)
    for (const auto k : kKinds) {
      CHECK(l.cell(DrcCategory::Goat, q, k).sample_count == 0);
      CHECK(l.cell(DrcCategory::WolfLamb, q, k).sample_count == 0);
    }
  CHECK(l.cell(DrcCategory::Sheep, ComparisonQuality::HQ, ComparisonKind::Genuine).sample_count > 0);
}

TEST_CASE("landscape rejects an assignment from another set or exclusion") {
  const auto s = ScoreSet::from_records(ring(10, 1));
  const auto t = ScoreSet::from_records(ring(11, 1));
  CHECK_THROWS_AS(build_landscape(t, assign_drc(s, 0.025), std::nullopt, serial_params()),
                  InvalidArgument);
  const auto a = assign_drc(s, 0.025, sid(3));
  CHECK_THROWS_AS(build_landscape(s, a, sid(4), serial_params()), InvalidArgument);
  CHECK_THROWS_AS(assign_drc(s, 0.025, "nobody"), UnknownSubject);
}

TEST_CASE("add then remove restores the landscape") {
  const auto out = fixture::synth(30, 2);
  const auto l0 = build_full_landscape(out.scores, serial_params());
  std::vector<ScoreRecord> extra;
  for (int i = 0; i < 3; ++i) extra.push_back(hh("Znew", "Znew", 0.7 + 0.05 * i));
  for (const auto& id : {"S01", "S02", "S03"}) extra.push_back(hh("Znew", id, 0.2));
  const auto r1 = mutate_watchlist(l0, out.scores, AddRecords{extra});
  CHECK(r1.landscape.version == 2);
  CHECK(r1.scores.subject_count() == 31);
  const auto r2 = mutate_watchlist(r1.landscape, r1.scores, RemoveSubject{"Znew"});
  CHECK(r2.landscape.version == 3);
  CHECK(r2.scores == out.scores);
  for (std::size_t c = 0; c < kCellCount; ++c) CHECK(mass_l1(l0.cells[c], r2.landscape.cells[c]) < 1e-12);
  CHECK_THROWS_AS(mutate_watchlist(l0, out.scores, RemoveSubject{"nobody"}), UnknownSubject);
}

TEST_CASE("replacing a goat's records lifts it out of goat") {
  auto rs = fixture::synth(40, 6).scores.records();
  const std::string x = "S05";
  for (auto& r : rs)
    if (r.subject_a == x && r.subject_b == x) r.raw_score = 0.1;
  const auto s = ScoreSet::from_records(rs);
  const auto l = build_full_landscape(s, serial_params());
  REQUIRE(l.assignment.category(x) == DrcCategory::Goat);

  std::vector<ScoreRecord> repl;
  for (const auto& r : rs)
    if (oracle::touches(r, x)) {
      auto copy = r;
      if (r.subject_a == r.subject_b) copy.raw_score = 0.9;
      repl.push_back(copy);
    }
  const auto after = mutate_watchlist(l, s, ReplaceSubject{x, repl});
  CHECK(after.landscape.assignment.category(x) != DrcCategory::Goat);
  const auto want = oracle::rank(after.scores.records(), oracle::range_of(after.scores.records()), 0.025);
  for (const auto& [id, cat] : want) CHECK(after.landscape.assignment.category(id) == cat);
  CHECK(after.landscape.assignment.count(DrcCategory::Goat) == 1);

  std::vector<ScoreRecord> stray{hh("S01", "S02", 0.5)};
  CHECK_THROWS_AS(mutate_watchlist(l, s, ReplaceSubject{x, stray}), InvalidArgument);
}

TEST_CASE("property: permutation of ids keeps the category multiset") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto out = fixture::synth(20 + rng.below(20), 100 + trial, 2);
    const auto& subjects = out.scores.subjects();
    auto perm = subjects;
    rng.shuffle(perm);
    std::map<std::string, std::string> rename;
    for (std::size_t i = 0; i < subjects.size(); ++i) rename[subjects[i]] = "R" + perm[i];
    auto rs = out.scores.records();
    for (auto& r : rs) {
      r.subject_a = rename[r.subject_a];
      r.subject_b = rename[r.subject_b];
    }
    const auto a = assign_drc(out.scores, 0.05);
    const auto b = assign_drc(ScoreSet::from_records(rs), 0.05);
    for (const auto c : kCategories) CHECK(a.count(c) == b.count(c));
  }
}

TEST_CASE("property: lowering a goat's genuine scores keeps it a goat") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto rs = fixture::synth(25, 200 + trial, 2).scores.records();
    const auto a = assign_drc(ScoreSet::from_records(rs), 0.05);
    for (const auto& id : a.subjects) {
      if (a.category(id) != DrcCategory::Goat) continue;
      const double drop = 0.3 * rng.uniform();
      for (auto& r : rs)
        if (r.subject_a == id && r.subject_b == id) r.raw_score = std::max(0.0, r.raw_score - drop);
      rs.push_back(hh("S01", "S02", 0.0));  // keep the global range
      rs.push_back(hh("S01", "S01", 1.0));
      CHECK(assign_drc(ScoreSet::from_records(rs), 0.05).category(id) == DrcCategory::Goat);
      break;
    }
  }
}

TEST_CASE("property: mass sums to one and ignores input order") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> xs(1 + rng.below(50));
    for (auto& x : xs) x = rng.uniform();
    const int bins = 2 + static_cast<int>(rng.below(150));
    const double h = 0.001 + 0.2 * rng.uniform();
    const auto d = build_distribution(xs, bins, h, Execution::Serial);
    CHECK(std::accumulate(d.mass.begin(), d.mass.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    auto ys = xs;
    rng.shuffle(ys);
    const auto e = build_distribution(ys, bins, h, Execution::Serial);
    for (int k = 0; k < bins; ++k) CHECK(e.mass[k] == doctest::Approx(d.mass[k]).epsilon(1e-12));
  }
}

TEST_CASE("property: exclusion soundness by recount") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto out = fixture::synth(24, seed, 2);
    const auto& rs = out.scores.records();
    const auto range = oracle::range_of(rs);
    for (const auto& x : {"S01", "S10", "S24"}) {
      const auto l = build_full_landscape(out.scores, serial_params(), std::string(x));
      const auto cats = oracle::rank(rs, range, 0.025, std::string(x));
      auto with_x = cats;
      with_x[x] = DrcCategory::Sheep;
      for (std::size_t c = 0; c < kCellCount; ++c) {
        const auto key = cell_key(c);
        CHECK(l.cells[c].sample_count ==
              oracle::pool(rs, range, with_x, std::string(x), key.category, key.quality, key.kind).size());
      }
      std::size_t total = 0, expected = 0;
      for (const auto& cell : l.cells) total += cell.sample_count;
      for (const auto& r : rs) {
        if (oracle::touches(r, x)) continue;
        const bool split = r.subject_a != r.subject_b && cats.at(r.subject_a) != cats.at(r.subject_b);
        expected += split ? 2 : 1;
      }
      CHECK(total == expected);
    }
  }
}

TEST_CASE("property: mutation is referentially transparent") {
  const auto out = fixture::synth(20, 5, 2);
  const auto l = build_full_landscape(out.scores, serial_params());
  const auto a = mutate_watchlist(l, out.scores, RemoveSubject{"S07"});
  const auto b = mutate_watchlist(l, out.scores, RemoveSubject{"S07"});
  for (std::size_t c = 0; c < kCellCount; ++c) CHECK(a.landscape.cells[c].mass == b.landscape.cells[c].mass);
}

}  // TEST_SUITE
