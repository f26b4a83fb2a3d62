#include "watchlist/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "watchlist/error.hpp"
#include "watchlist/io.hpp"

namespace watchlist {

namespace {

std::vector<std::string> split(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

std::vector<MetricId> parse_metric_list(const std::string& csv) {
  if (csv == "all") {
    const auto& all = all_metrics();
    return {all.begin(), all.end()};
  }
  std::vector<MetricId> out;
  for (const auto& name : split(csv)) out.push_back(parse_metric(name));
  if (out.empty()) throw InvalidArgument("empty metric list");
  return out;
}

std::vector<Classifier> parse_classifier_list(const std::string& csv) {
  std::vector<Classifier> out;
  if (csv == "none") return out;
  for (const auto& name : split(csv)) {
    const auto c = parse_classifier(name);
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

FeatureMode parse_feature_mode(const std::string& s) {
  if (s == "per-kind-3" || s == "per-kind") return FeatureMode::PerKind;
  if (s == "combined-6" || s == "combined") return FeatureMode::Combined;
  throw InvalidArgument("unknown feature mode '" + s + "' (per-kind-3 | combined-6)");
}

std::string_view to_string(FeatureMode m) {
  return m == FeatureMode::PerKind ? "per-kind-3" : "combined-6";
}

BandwidthSpec parse_bandwidth(const std::string& s) {
  if (s == "auto") return BandwidthSpec::automatic();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw InvalidArgument("bandwidth must be 'auto' or a number, got '" + s + "'");
  return BandwidthSpec::value(v);
}

void RunConfig::validate() const {
  if (!(percentile > 0.0 && percentile < 0.5))
    throw InvalidArgument("--percentile must lie in (0, 0.5)");
  if (bins < 2) throw InvalidArgument("--bins must be >= 2");
  if (bandwidth.fixed && !(*bandwidth.fixed > 0.0 && std::isfinite(*bandwidth.fixed)))
    throw InvalidArgument("--bandwidth must be positive");
  if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
  if (!(lambda_reg > 0.0)) throw InvalidArgument("lambda_reg must be > 0");
  if (!(thresholds.medium >= 0.0 && thresholds.medium <= thresholds.high && thresholds.high <= 1.0))
    throw InvalidArgument("risk thresholds must satisfy 0 <= medium <= high <= 1");
  if (out.empty()) throw InvalidArgument("--out must not be empty");
  cost_profile().validate();
}

bool RunConfig::uses(Classifier c) const {
  return std::find(classifiers.begin(), classifiers.end(), c) != classifiers.end();
}

LandscapeParams RunConfig::landscape_params() const {
  return {percentile, bins, bandwidth, execution()};
}

MarginHyper RunConfig::margin_hyper() const { return {lambda_reg, epochs, seed}; }

EvalConfig RunConfig::eval_config() const {
  return {landscape_params(), margin_hyper(), features, execution()};
}

CostProfile RunConfig::cost_profile() const {
  if (costs == "default") return CostProfile::standard();
  std::ifstream in(costs);
  if (!in) throw InvalidArgument("cannot open cost profile '" + costs + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("cost profile '" + costs + "': " + e.what());
  }
  return cost_profile_from_json(j);
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["percentile"] = percentile;
  j["bins"] = bins;
  j["bandwidth"] = bandwidth.fixed ? nlohmann::json(*bandwidth.fixed) : nlohmann::json("auto");
  auto& m = j["metrics"] = nlohmann::json::array();
  for (const auto id : metrics) m.push_back(to_string(id));
  j["costs"] = costs;
  auto& c = j["classifiers"] = nlohmann::json::array();
  for (const auto id : classifiers) c.push_back(to_string(id));
  j["features"] = to_string(features);
  j["seed"] = seed;
  j["epochs"] = epochs;
  j["lambda_reg"] = lambda_reg;
  j["thresholds"] = {{"medium", thresholds.medium}, {"high", thresholds.high}};
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j, RunConfig base) {
  if (!j.is_object()) throw InvalidArgument("config file must hold a JSON object");
  try {
    if (j.contains("percentile")) base.percentile = j.at("percentile").get<double>();
    if (j.contains("bins")) base.bins = j.at("bins").get<int>();
    if (j.contains("bandwidth")) {
      const auto& b = j.at("bandwidth");
      base.bandwidth = b.is_string() ? parse_bandwidth(b.get<std::string>())
                                     : BandwidthSpec::value(b.get<double>());
    }
    if (j.contains("metrics")) {
      const auto& m = j.at("metrics");
      if (m.is_string()) {
        base.metrics = parse_metric_list(m.get<std::string>());
      } else {
        base.metrics.clear();
        for (const auto& x : m) base.metrics.push_back(parse_metric(x.get<std::string>()));
      }
    }
    if (j.contains("costs")) base.costs = j.at("costs").get<std::string>();
    if (j.contains("classifiers")) {
      base.classifiers.clear();
      for (const auto& x : j.at("classifiers"))
        base.classifiers.push_back(parse_classifier(x.get<std::string>()));
    }
    if (j.contains("features")) base.features = parse_feature_mode(j.at("features").get<std::string>());
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) base.out = j.at("out").get<std::string>();
    if (j.contains("epochs")) base.epochs = j.at("epochs").get<int>();
    if (j.contains("lambda_reg")) base.lambda_reg = j.at("lambda_reg").get<double>();
    if (j.contains("thresholds")) {
      const auto& t = j.at("thresholds");
      base.thresholds.medium = t.value("medium", base.thresholds.medium);
      base.thresholds.high = t.value("high", base.thresholds.high);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  return base;
}

std::string RunConfig::hash() const {
  const auto text = to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace watchlist
