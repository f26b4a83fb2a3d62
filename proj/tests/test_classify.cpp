#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "watchlist/classify.hpp"
#include "watchlist/error.hpp"
#include "watchlist/rng.hpp"

using namespace watchlist;

namespace {

DissimilarityVector dv(double goat, double wolf, double sheep) {
  DissimilarityVector v;
  v.values[DrcCategory::Goat] = goat;
  v.values[DrcCategory::WolfLamb] = wolf;
  v.values[DrcCategory::Sheep] = sheep;
  return v;
}

FeatureVector fv(std::vector<double> x) { return {std::move(x), MetricId::Euclidean, ComparisonQuality::HQ}; }

// Two classes at (0,1,1) and (1,0,1) with +-0.05 uniform jitter.
struct Toy {
  std::vector<FeatureVector> x;
  std::vector<DrcCategory> y;
};

Toy toy(std::uint64_t seed, std::size_t per_class = 20) {
  Rng rng(seed);
  Toy t;
  const std::array<std::array<double, 3>, 2> centers{{{0, 1, 1}, {1, 0, 1}}};
  const std::array<DrcCategory, 2> labels{DrcCategory::Goat, DrcCategory::Sheep};
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<double> x(3);
      for (int d = 0; d < 3; ++d) x[d] = centers[c][d] + 0.1 * (rng.uniform() - 0.5);
      t.x.push_back(fv(x));
      t.y.push_back(labels[c]);
    }
  return t;
}

}  // namespace

TEST_SUITE("classify") {

TEST_CASE("minimum rule") {
  CHECK(min_rule(dv(0.1, 0.2, 0.7)) == DrcCategory::Goat);
  CHECK(min_rule(dv(0.5, 0.5, 0.5)) == DrcCategory::WolfLamb);
  CHECK(min_rule(dv(0.9, 0.8, 0.05)) == DrcCategory::Sheep);
  CHECK(min_rule(dv(0.3, 0.4, 0.3)) == DrcCategory::Goat);
  CHECK(min_rule(dv(0.4, 0.3, 0.3)) == DrcCategory::WolfLamb);
}

TEST_CASE("feature layout") {
  const auto g = dv(0.1, 0.2, 0.3);
  const auto i = dv(0.4, 0.5, 0.6);
  CHECK(make_features(g).values == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(make_features(g, i).values == std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
}

TEST_CASE("separable toy set is fit exactly") {
  const auto t = toy(1);
  const auto m = train_margin(t.x, t.y);
  for (std::size_t i = 0; i < t.x.size(); ++i) CHECK(predict_margin(m, t.x[i]) == t.y[i]);
  CHECK(predict_margin(m, fv({0, 1, 1})) == DrcCategory::Goat);
  CHECK(predict_margin(m, fv({1, 0, 1})) == DrcCategory::Sheep);
  CHECK(m.loss_history.size() == 200);
  for (std::size_t e = 1; e < m.loss_history.size(); ++e) CHECK(m.loss_history[e] <= m.loss_history[e - 1]);
}

TEST_CASE("three-class separable set") {
  Rng rng(2);
  std::vector<FeatureVector> x;
  std::vector<DrcCategory> y;
  for (const auto c : kCategories)
    for (int i = 0; i < 15; ++i) {
      std::vector<double> f(3, 0.8);
      f[index(c)] = 0.1;
      for (auto& v : f) v += 0.1 * (rng.uniform() - 0.5);
      x.push_back(fv(f));
      y.push_back(c);
    }
  const auto m = train_margin(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(predict_margin(m, x[i]) == y[i]);
}

TEST_CASE("training is deterministic for a fixed seed") {
  const auto t = toy(4);
  const auto a = train_margin(t.x, t.y);
  const auto b = train_margin(t.x, t.y);
  for (const auto c : kCategories) {
    CHECK(a.weights[c] == b.weights[c]);
    CHECK(a.bias[c] == b.bias[c]);
  }
  MarginHyper other;
  other.seed = 99;
  const auto d = train_margin(t.x, t.y, other);
  bool differs = false;
  for (const auto c : kCategories) differs |= d.weights[c] != a.weights[c];
  CHECK(differs);
}

TEST_CASE("training preconditions") {
  const auto t = toy(1, 3);
  std::vector<DrcCategory> same(t.y.size(), DrcCategory::Sheep);
  CHECK_THROWS_AS(train_margin(t.x, same), InvalidArgument);
  CHECK_THROWS_AS(train_margin(t.x, std::span<const DrcCategory>(t.y).first(2)), InvalidArgument);
  CHECK_THROWS_AS(train_margin({}, {}), InvalidArgument);
  auto ragged = t.x;
  ragged[1].values.push_back(0.0);
  CHECK_THROWS_AS(train_margin(ragged, t.y), InvalidArgument);
  MarginHyper bad;
  bad.lambda = 0;
  CHECK_THROWS_AS(train_margin(t.x, t.y, bad), InvalidArgument);
  bad = {};
  bad.epochs = 0;
  CHECK_THROWS_AS(train_margin(t.x, t.y, bad), InvalidArgument);
}

TEST_CASE("prediction tie-break and length check") {
  MarginModel m;
  for (const auto c : kCategories) m.weights[c] = {0, 0, 0};
  CHECK(predict_margin(m, fv({0.3, 0.1, 0.9})) == DrcCategory::WolfLamb);
  CHECK_THROWS_AS(predict_margin(m, fv({0.3, 0.1})), InvalidArgument);
}

TEST_CASE("property: minimum rule ignores increasing transforms") {
  Rng rng(7);
  const std::array<double (*)(double), 4> transforms{
      [](double x) { return 3 * x + 1; }, [](double x) { return x * x * x; },
      [](double x) { return std::exp(x); }, [](double x) { return std::sqrt(x); }};
  for (int trial = 0; trial < 5000; ++trial) {
    auto v = dv(rng.uniform(), rng.uniform(), rng.uniform());
    if (trial % 7 == 0) v.values[DrcCategory::Sheep] = v.values[DrcCategory::Goat];
    const auto want = oracle::argmin(v);
    CHECK(min_rule(v) == want);
    for (const auto f : transforms) {
      auto w = v;
      for (auto& x : w.values.values) x = f(x);
      CHECK(min_rule(w) == want);
    }
  }
}

TEST_CASE("property: prediction ignores positive scaling of class scores") {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    MarginModel m;
    for (const auto c : kCategories) {
      m.weights[c] = {rng.normal(), rng.normal(), rng.normal()};
      m.bias[c] = rng.normal();
    }
    const auto x = fv({rng.uniform(), rng.uniform(), rng.uniform()});
    const auto want = predict_margin(m, x);
    const double k = 0.01 + 100 * rng.uniform();
    for (const auto c : kCategories) {
      for (auto& w : m.weights[c]) w *= k;
      m.bias[c] *= k;
    }
    CHECK(predict_margin(m, x) == want);
  }
}

}  // TEST_SUITE
