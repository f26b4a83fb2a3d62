#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "watchlist/classify.hpp"
#include "watchlist/evaluate.hpp"
#include "watchlist/landscape.hpp"
#include "watchlist/metrics.hpp"
#include "watchlist/risk.hpp"

namespace watchlist {

inline constexpr const char* kToolName = "watchlist";
inline constexpr const char* kToolVersion = "0.1.0";

/// Every free parameter of a command run. Loaded from an optional JSON
/// config file, then overridden by command-line flags.
struct RunConfig {
  double percentile = 0.025;
  int bins = 100;
  BandwidthSpec bandwidth;          // auto unless set
  std::vector<MetricId> metrics;    // empty: the command's default
  std::string costs = "default";    // "default" or a cost-profile JSON path
  std::vector<Classifier> classifiers{Classifier::MinRule, Classifier::Margin};
  FeatureMode features = FeatureMode::PerKind;
  std::uint64_t seed = 1;
  std::string out = ".";
  int epochs = 200;
  double lambda_reg = 1e-3;
  RiskThresholds thresholds;
  bool serial = false;

  /// Throws InvalidArgument on the first violated precondition.
  void validate() const;

  bool uses(Classifier c) const;
  Execution execution() const { return serial ? Execution::Serial : Execution::Parallel; }
  LandscapeParams landscape_params() const;
  EvalConfig eval_config() const;
  MarginHyper margin_hyper() const;
  /// Loads the cost profile named by `costs`.
  CostProfile cost_profile() const;

  nlohmann::json to_json() const;
  /// Applies the keys present in `j` on top of `base`.
  static RunConfig from_json(const nlohmann::json& j, RunConfig base);
  static RunConfig from_json(const nlohmann::json& j) { return from_json(j, RunConfig{}); }
  /// FNV-1a over the canonical JSON form, as 16 hex digits.
  std::string hash() const;
};

std::vector<MetricId> parse_metric_list(const std::string& csv);
std::vector<Classifier> parse_classifier_list(const std::string& csv);
FeatureMode parse_feature_mode(const std::string& s);
std::string_view to_string(FeatureMode m);
BandwidthSpec parse_bandwidth(const std::string& s);

}  // namespace watchlist
