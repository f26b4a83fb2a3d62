#include "watchlist/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "watchlist/error.hpp"
#include "watchlist/rng.hpp"

namespace watchlist {

FeatureVector make_features(const DissimilarityVector& v) {
  FeatureVector f;
  f.metric = v.metric;
  f.quality = v.quality;
  for (const auto c : kCategories) f.values.push_back(v[c]);
  return f;
}

FeatureVector make_features(const DissimilarityVector& genuine, const DissimilarityVector& impostor) {
  if (genuine.metric != impostor.metric || genuine.quality != impostor.quality)
    throw InvalidArgument("combined features need the same metric and quality");
  auto f = make_features(genuine);
  for (const auto c : kCategories) f.values.push_back(impostor[c]);
  return f;
}

namespace {

// Picks the best category under `better`, resolving exact ties toward the
// higher-cost category.
template <class Better>
DrcCategory pick(const CategoryMap<double>& v, Better better) {
  DrcCategory best = DrcCategory::WolfLamb;
  for (const auto c : {DrcCategory::Goat, DrcCategory::Sheep}) {
    if (better(v[c], v[best])) best = c;
  }
  return best;
}

double dot(std::span<const double> w, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * x[i];
  return acc;
}

struct Binary {
  std::vector<double> w;  // last entry is the bias weight
  std::vector<double> loss;
};

double objective(const std::vector<double>& w, std::span<const std::vector<double>> x,
                 std::span<const double> y, double lambda) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) hinge += std::max(0.0, 1.0 - y[i] * dot(w, x[i]));
  return 0.5 * lambda * dot(w, w) + hinge / static_cast<double>(x.size());
}

Binary train_binary(std::span<const std::vector<double>> x, std::span<const double> y,
                    const MarginHyper& hyper, std::uint64_t stream) {
  const std::size_t dim = x.front().size();
  std::vector<double> w(dim, 0.0);
  Binary best{w, {}};
  double best_obj = objective(w, x, y, hyper.lambda);
  const double radius = 1.0 / std::sqrt(hyper.lambda);

  Rng rng(hyper.seed * 0x100000001b3ULL + stream);
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(order);
    for (const auto i : order) {
      ++t;
      const double eta = 1.0 / (hyper.lambda * static_cast<double>(t));
      const bool violated = y[i] * dot(w, x[i]) < 1.0;
      const double shrink = 1.0 - eta * hyper.lambda;
      for (auto& wj : w) wj *= shrink;
      if (violated)
        for (std::size_t j = 0; j < dim; ++j) w[j] += eta * y[i] * x[i][j];
      const double norm = std::sqrt(dot(w, w));
      if (norm > radius)
        for (auto& wj : w) wj *= radius / norm;
    }
    const double obj = objective(w, x, y, hyper.lambda);
    if (obj < best_obj) {
      best_obj = obj;
      best.w = w;
    }
    best.loss.push_back(best_obj);
  }
  return best;
}

}  // namespace

DrcCategory min_rule(const DissimilarityVector& v) {
  return pick(v.values, [](double a, double b) { return a < b; });
}

CategoryMap<double> MarginModel::scores(std::span<const double> f) const {
  CategoryMap<double> s;
  for (const auto c : kCategories) s[c] = dot(weights[c], f) + bias[c];
  return s;
}

MarginModel train_margin(std::span<const FeatureVector> features,
                         std::span<const DrcCategory> labels, const MarginHyper& hyper) {
  if (features.size() != labels.size())
    throw InvalidArgument("features and labels differ in length");
  if (features.empty()) throw InvalidArgument("no training examples");
  if (!(hyper.lambda > 0.0) || hyper.epochs < 1)
    throw InvalidArgument("margin hyperparameters need lambda > 0 and epochs >= 1");
  const auto len = features.front().values.size();
  if (len == 0) throw InvalidArgument("empty feature vector");
  for (const auto& f : features)
    if (f.values.size() != len) throw InvalidArgument("inconsistent feature lengths");
  if (std::set<DrcCategory>(labels.begin(), labels.end()).size() < 2)
    throw InvalidArgument("training labels contain a single class");

  std::vector<std::vector<double>> x;
  x.reserve(features.size());
  for (const auto& f : features) {
    auto row = f.values;
    row.push_back(1.0);
    x.push_back(std::move(row));
  }

  MarginModel model;
  model.hyper = hyper;
  model.loss_history.assign(static_cast<std::size_t>(hyper.epochs), 0.0);
  std::vector<double> y(labels.size());
  for (const auto c : kCategories) {
    for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == c ? 1.0 : -1.0;
    auto fit = train_binary(x, y, hyper, index(c));
    model.bias[c] = fit.w.back();
    fit.w.pop_back();
    model.weights[c] = std::move(fit.w);
    for (std::size_t e = 0; e < fit.loss.size(); ++e) model.loss_history[e] += fit.loss[e] / 3.0;
  }
  return model;
}

DrcCategory predict_margin(const MarginModel& m, const FeatureVector& f) {
  if (f.values.size() != m.feature_length())
    throw InvalidArgument("feature length " + std::to_string(f.values.size()) +
                          " does not match model length " + std::to_string(m.feature_length()));
  return pick(m.scores(f.values), [](double a, double b) { return a > b; });
}

}  // namespace watchlist
