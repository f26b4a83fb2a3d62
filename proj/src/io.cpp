#include "watchlist/io.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <ostream>

#include "watchlist/config.hpp"
#include "watchlist/error.hpp"

namespace watchlist {

using nlohmann::json;

std::string provenance_comment(const Provenance& p) {
  std::string s = std::string("# tool=") + kToolName + " " + kToolVersion + " config=" + p.config_hash;
  if (p.landscape_version) s += " landscape_version=" + std::to_string(*p.landscape_version);
  return s;
}

json provenance_json(const Provenance& p) {
  json j{{"tool", kToolName}, {"tool_version", kToolVersion}, {"config_hash", p.config_hash}};
  if (p.landscape_version) j["landscape_version"] = *p.landscape_version;
  return j;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

namespace {

json category_map_json(const CategoryMap<double>& m) {
  json j = json::object();
  for (const auto c : kCategories) j[std::string(to_string(c))] = m[c];
  return j;
}

CategoryMap<double> category_map_from(const json& j) {
  CategoryMap<double> m;
  for (const auto c : kCategories) m[c] = j.at(std::string(to_string(c))).get<double>();
  return m;
}

}  // namespace

json landscape_to_json(const Landscape& l, const Provenance& p) {
  json j;
  j["format"] = "watchlist-landscape";
  j["provenance"] = provenance_json(p);
  j["version"] = l.version;
  j["percentile"] = l.params.percentile;
  j["bins"] = l.params.bins;
  j["bandwidth"] = l.params.bandwidth.fixed ? json(*l.params.bandwidth.fixed) : json("auto");
  j["subjects"] = l.assignment.universe();
  j["ranked_subjects"] = l.assignment.ranked_count;
  j["flagged_count"] = l.assignment.flagged_count;
  j["proportions"] = category_map_json(l.proportions);
  j["bin_edges"] = l.cells.front().bin_edges;
  auto& cells = j["cells"] = json::array();
  for (std::size_t c = 0; c < kCellCount; ++c) {
    const auto key = cell_key(c);
    const auto& d = l.cells[c];
    cells.push_back({{"category", to_string(key.category)},
                     {"quality", to_string(key.quality)},
                     {"kind", to_string(key.kind)},
                     {"sample_count", d.sample_count},
                     {"bandwidth", d.bandwidth},
                     {"mass", d.mass}});
  }
  return j;
}

LandscapeDoc landscape_from_json(const json& j) {
  LandscapeDoc doc;
  try {
    if (j.value("format", "") != "watchlist-landscape")
      throw InvalidArgument("not a landscape document");
    doc.version = j.at("version").get<std::uint64_t>();
    doc.percentile = j.at("percentile").get<double>();
    doc.proportions = category_map_from(j.at("proportions"));
    doc.bin_edges = j.at("bin_edges").get<std::vector<double>>();
    if (doc.bin_edges.size() < 3) throw InvalidArgument("bin_edges needs at least 3 entries");
    for (std::size_t k = 1; k < doc.bin_edges.size(); ++k)
      if (!(doc.bin_edges[k] > doc.bin_edges[k - 1]))
        throw InvalidArgument("bin_edges must be strictly increasing");
    const auto& cells = j.at("cells");
    if (!cells.is_array() || cells.size() != kCellCount)
      throw InvalidArgument("expected 18 cells");
    std::array<bool, kCellCount> seen{};
    for (const auto& cj : cells) {
      const auto c = cell_index(parse_category(cj.at("category").get<std::string>()),
                                parse_quality(cj.at("quality").get<std::string>()),
                                parse_kind(cj.at("kind").get<std::string>()));
      if (seen[c]) throw InvalidArgument("duplicate cell in landscape document");
      seen[c] = true;
      ScoreDistribution d;
      d.bin_edges = doc.bin_edges;
      d.mass = cj.at("mass").get<std::vector<double>>();
      d.sample_count = cj.at("sample_count").get<std::size_t>();
      d.bandwidth = cj.at("bandwidth").get<double>();
      if (d.mass.size() + 1 != doc.bin_edges.size())
        throw InvalidArgument("cell mass length does not match bin_edges");
      doc.cells[c] = std::move(d);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed landscape document: ") + e.what());
  }
  return doc;
}

namespace {

// Mass in millionths, rounded by largest remainder so the printed column
// still sums to exactly 1.
std::vector<long long> micro_units(const std::vector<double>& mass) {
  const std::size_t n = mass.size();
  std::vector<long long> out(n);
  std::vector<std::pair<double, std::size_t>> rest(n);
  long long total = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double scaled = mass[k] * 1e6;
    out[k] = static_cast<long long>(std::floor(scaled));
    rest[k] = {scaled - static_cast<double>(out[k]), k};
    total += out[k];
  }
  std::stable_sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; total < 1000000 && k < n; ++k, ++total) ++out[rest[k].second];
  return out;
}

}  // namespace

void write_plotdata_csv(std::ostream& out, const LandscapeDoc& doc, const Provenance& p) {
  out << provenance_comment(p) << '\n';
  out << "category,quality,kind,bin_center,mass\n";
  for (std::size_t c = 0; c < kCellCount; ++c) {
    const auto key = cell_key(c);
    const auto& d = doc.cells[c];
    if (d.empty()) {
      out << "# empty cell " << to_string(key.category) << '/' << to_string(key.quality) << '/'
          << to_string(key.kind) << '\n';
      continue;
    }
    const auto centers = d.centers();
    const auto micro = micro_units(d.mass);
    for (std::size_t k = 0; k < d.bins(); ++k) {
      char mass[32];
      std::snprintf(mass, sizeof mass, "%lld.%06lld", micro[k] / 1000000, micro[k] % 1000000);
      out << to_string(key.category) << ',' << to_string(key.quality) << ',' << to_string(key.kind)
          << ',' << fixed6(centers[k]) << ',' << mass << '\n';
    }
  }
}

void write_assignment_csv(std::ostream& out, const DrcAssignment& a, const Provenance& p) {
  out << provenance_comment(p) << '\n';
  out << "subject,category,mean_genuine,mean_impostor\n";
  for (std::size_t i = 0; i < a.subjects.size(); ++i) {
    const auto& e = a.entries[i];
    if (!e.included) continue;
    out << a.subjects[i] << ',' << to_string(e.category) << ',' << fixed6(e.mean_genuine) << ','
        << fixed6(e.mean_impostor) << '\n';
  }
}

std::string proportions_table(const CategoryMap<double>& p) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "goat      wolf_lamb  sheep\n%.4f    %.4f     %.4f",
                p[DrcCategory::Goat], p[DrcCategory::WolfLamb], p[DrcCategory::Sheep]);
  return buf;
}

void write_metric_grid_csv(std::ostream& out, std::span<const DissimilarityVector> grid,
                           const Provenance& p) {
  out << provenance_comment(p) << '\n';
  out << "metric,quality,kind,goat,wolf_lamb,sheep\n";
  for (const auto& v : grid)
    out << to_string(v.metric) << ',' << to_string(v.quality) << ',' << to_string(v.kind) << ','
        << fixed6(v[DrcCategory::Goat]) << ',' << fixed6(v[DrcCategory::WolfLamb]) << ','
        << fixed6(v[DrcCategory::Sheep]) << '\n';
}

void write_sensitivity_csv(std::ostream& out, const SensitivityTable& t, const Provenance& p) {
  out << provenance_comment(p) << '\n';
  out << "metric";
  for (const auto c : t.classifiers)
    for (const auto k : kKinds)
      for (const auto q : kQualities)
        out << ',' << to_string(c) << ':' << to_string(k) << ':' << to_string(q);
  out << '\n';
  char buf[32];
  for (const auto m : t.metrics) {
    out << to_string(m);
    for (const auto c : t.classifiers) {
      for (const auto k : kKinds) {
        for (const auto q : kQualities) {
          out << ',';
          const auto& cell = t.at(m, c, k, q);
          if (cell.sensitivity) {
            std::snprintf(buf, sizeof buf, "%.2f", *cell.sensitivity);
            out << buf;
          }
        }
      }
    }
    out << '\n';
  }
}

json sensitivity_to_json(const SensitivityTable& t, const Provenance& p) {
  json j;
  j["provenance"] = provenance_json(p);
  auto& metrics = j["metrics"] = json::array();
  for (const auto m : t.metrics) metrics.push_back(to_string(m));
  auto& classifiers = j["classifiers"] = json::array();
  for (const auto c : t.classifiers) classifiers.push_back(to_string(c));
  auto& cells = j["cells"] = json::array();
  for (const auto& c : t.cells) {
    json cj{{"metric", to_string(c.metric)},
            {"classifier", to_string(c.classifier)},
            {"kind", to_string(c.kind)},
            {"quality", to_string(c.quality)},
            {"correct", c.correct},
            {"total", c.total}};
    cj["sensitivity"] = c.sensitivity ? json(*c.sensitivity) : json(nullptr);
    if (!c.reason.empty()) cj["reason"] = c.reason;
    cells.push_back(std::move(cj));
  }
  return j;
}

json model_to_json(const MarginModel& m) {
  json weights = json::object();
  json bias = json::object();
  for (const auto c : kCategories) {
    weights[std::string(to_string(c))] = m.weights[c];
    bias[std::string(to_string(c))] = m.bias[c];
  }
  return {{"format", "watchlist-margin-model"},
          {"weights", weights},
          {"bias", bias},
          {"hyper", {{"lambda", m.hyper.lambda}, {"epochs", m.hyper.epochs}, {"seed", m.hyper.seed}}}};
}

MarginModel model_from_json(const json& j) {
  MarginModel m;
  try {
    for (const auto c : kCategories) {
      const std::string key(to_string(c));
      m.weights[c] = j.at("weights").at(key).get<std::vector<double>>();
      m.bias[c] = j.at("bias").at(key).get<double>();
    }
    const auto& h = j.at("hyper");
    m.hyper.lambda = h.at("lambda").get<double>();
    m.hyper.epochs = h.at("epochs").get<int>();
    m.hyper.seed = h.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed model document: ") + e.what());
  }
  const auto len = m.weights[DrcCategory::Sheep].size();
  for (const auto c : kCategories)
    if (m.weights[c].size() != len) throw InvalidArgument("model weight vectors differ in length");
  return m;
}

json cost_profile_to_json(const CostProfile& c) {
  return {{"name", c.name}, {"lambda", category_map_json(c.lambda)}};
}

CostProfile cost_profile_from_json(const json& j) {
  CostProfile c;
  try {
    c.name = j.value("name", std::string("custom"));
    c.lambda = category_map_from(j.at("lambda"));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed cost profile: ") + e.what());
  }
  c.validate();
  return c;
}

json report_to_json(const RiskReport& r, const Provenance& p) {
  json j;
  j["provenance"] = provenance_json(p);
  j["subject"] = r.subject;
  j["metric"] = to_string(r.metric);
  j["cost_profile"] = r.cost_profile;
  j["landscape_version"] = r.landscape_version;
  auto& variants = j["variants"] = json::array();
  for (const auto v : r.variants) variants.push_back(to_string(v));
  j["headline"] = to_string(r.headline);
  j["average_risk"] = r.average_risk;
  j["level"] = to_string(r.level);
  json averages = json::object();
  for (std::size_t v = 0; v < 3; ++v)
    if (r.variant_average[v])
      averages[std::string(to_string(static_cast<RiskVariant>(v)))] = *r.variant_average[v];
  j["variant_average"] = averages;
  auto& cells = j["cells"] = json::array();
  for (const auto& c : r.cells) {
    json cj{{"quality", to_string(c.quality)},
            {"kind", to_string(c.kind)},
            {"dissimilarity", category_map_json(c.dissimilarity.values)},
            {"R1", c.r1}};
    if (c.r2) {
      cj["R2"] = *c.r2;
      cj["min_prediction"] = to_string(*c.min_prediction);
    }
    if (c.r3) {
      cj["R3"] = *c.r3;
      cj["margin_prediction"] = to_string(*c.margin_prediction);
    }
    cells.push_back(std::move(cj));
  }
  return j;
}

std::string report_summary_line(const RiskReport& r) {
  return r.subject + ',' + fixed6(r.average_risk) + ',' + std::string(to_string(r.level)) + ',' +
         r.variant_set() + ',' + std::to_string(r.landscape_version);
}

json truth_to_json(const SynthTruth& t) {
  json j = json::object();
  for (const auto& [id, cat] : t.planted) j[id] = to_string(cat);
  return j;
}

}  // namespace watchlist
