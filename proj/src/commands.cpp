#include "watchlist/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "watchlist/error.hpp"
#include "watchlist/io.hpp"

namespace watchlist {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + cfg.out + "': " + ec.message());
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  return f;
}

void write_json(const fs::path& path, const json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::vector<MetricId> metrics_or(const RunConfig& cfg, std::vector<MetricId> fallback) {
  return cfg.metrics.empty() ? fallback : cfg.metrics;
}

ScoreRecord record_from_json(const json& r) {
  ScoreRecord rec;
  rec.subject_a = r.at("subject_a").get<std::string>();
  rec.subject_b = r.at("subject_b").get<std::string>();
  rec.tier_a = parse_tier(r.at("tier_a").get<std::string>());
  rec.tier_b = parse_tier(r.at("tier_b").get<std::string>());
  rec.raw_score = r.at("score").get<double>();
  if (rec.subject_a.empty() || rec.subject_b.empty())
    throw InvalidArgument("mutation record with empty subject id");
  if (!std::isfinite(rec.raw_score)) throw InvalidArgument("mutation record score is not finite");
  return rec;
}

std::vector<ScoreRecord> records_from(const json& op, const std::string& base_dir) {
  std::vector<ScoreRecord> out;
  if (op.contains("records"))
    for (const auto& r : op.at("records")) out.push_back(record_from_json(r));
  if (op.contains("records_csv")) {
    fs::path p(op.at("records_csv").get<std::string>());
    if (p.is_relative()) p = fs::path(base_dir) / p;
    const auto set = read_score_csv(p.string());
    out.insert(out.end(), set.records().begin(), set.records().end());
  }
  if (out.empty()) throw InvalidArgument("mutation needs 'records' or 'records_csv'");
  return out;
}

std::string describe(const WatchlistMutation& m) {
  if (const auto* a = std::get_if<AddRecords>(&m)) return "add " + std::to_string(a->records.size()) + " records";
  if (const auto* r = std::get_if<ReplaceSubject>(&m)) return "replace " + r->subject;
  return "remove " + std::get<RemoveSubject>(m).subject;
}

}  // namespace

std::vector<WatchlistMutation> parse_mutations(const json& j, const std::string& base_dir) {
  const json& ops = j.is_array() ? j : j.at("ops");
  std::vector<WatchlistMutation> out;
  try {
    for (const auto& op : ops) {
      const auto kind = op.at("op").get<std::string>();
      if (kind == "add") {
        out.emplace_back(AddRecords{records_from(op, base_dir)});
      } else if (kind == "replace") {
        out.emplace_back(ReplaceSubject{op.at("subject").get<std::string>(), records_from(op, base_dir)});
      } else if (kind == "remove") {
        out.emplace_back(RemoveSubject{op.at("subject").get<std::string>()});
      } else {
        throw InvalidArgument("unknown mutation op '" + kind + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed mutation spec: ") + e.what());
  }
  if (out.empty()) throw InvalidArgument("mutation spec has no ops");
  return out;
}

void cmd_landscape(const std::string& scores_csv, const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto s = read_score_csv(scores_csv);
  const auto l = build_full_landscape(s, cfg.landscape_params());
  const auto dir = output_dir(cfg);
  const Provenance prov{cfg.hash(), l.version};

  write_json(dir / "landscape.json", landscape_to_json(l, prov));
  auto csv = open_out(dir / "assignment.csv");
  write_assignment_csv(csv, l.assignment, prov);

  out << "subjects " << l.assignment.universe() << ", ranked " << l.assignment.ranked_count
      << ", flagged per category " << l.assignment.flagged_count << '\n';
  for (const auto& id : l.assignment.unranked)
    out << "warning: subject " << id << " lacks genuine or impostor scores; assigned sheep\n";
  out << proportions_table(l.proportions) << '\n';
}

void cmd_assess(const std::string& scores_csv, const SubjectId& subject, const RunConfig& cfg,
                std::ostream& out) {
  cfg.validate();
  const auto s = read_score_csv(scores_csv);
  if (!s.contains(subject)) throw UnknownSubject(subject);
  const auto params = cfg.landscape_params();
  const auto a = assign_drc(s, params.percentile);
  auto l = build_landscape(s, a, subject, params);
  const auto costs = cfg.cost_profile();
  const auto metrics = metrics_or(cfg, {MetricId::Euclidean});

  std::optional<MarginBank> bank;
  if (cfg.uses(Classifier::Margin))
    bank = train_margin_bank(s, l, metrics.front(), cfg.features, cfg.margin_hyper());
  AssessOptions opts;
  opts.min_rule = cfg.uses(Classifier::MinRule);
  opts.margin = bank ? &*bank : nullptr;
  opts.features = cfg.features;
  opts.thresholds = cfg.thresholds;
  const auto report = assess_traveler(subject, s, l, metrics.front(), costs, opts);

  // Dissimilarities under every requested metric for the populated cells.
  const auto slices = subject_score_slices(s, subject);
  std::vector<DissimilarityVector> grid;
  for (const auto& cell : report.cells) {
    const auto d = build_distribution(slices.at(cell.kind, cell.quality), params.bins,
                                      params.bandwidth, params.exec);
    auto sweep = metric_sweep(metrics, d, l, cell.quality, cell.kind, cfg.execution());
    grid.insert(grid.end(), sweep.begin(), sweep.end());
  }

  const auto dir = output_dir(cfg);
  const Provenance prov{cfg.hash(), l.version};
  write_json(dir / ("report_" + subject + ".json"), report_to_json(report, prov));
  {
    auto f = open_out(dir / ("metric_grid_" + subject + ".csv"));
    write_metric_grid_csv(f, grid, prov);
  }
  {
    auto f = open_out(dir / "summary.csv");
    f << provenance_comment(prov) << '\n' << kSummaryHeader << '\n' << report_summary_line(report) << '\n';
  }
  out << kSummaryHeader << '\n' << report_summary_line(report) << '\n';
}

void cmd_evaluate(const std::string& scores_csv, const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  if (cfg.classifiers.empty()) throw InvalidArgument("evaluate needs at least one classifier");
  const auto s = read_score_csv(scores_csv);
  const auto metrics = metrics_or(cfg, {all_metrics().begin(), all_metrics().end()});
  const auto table = sensitivity_table(s, metrics, cfg.classifiers, cfg.eval_config());
  const bool any = std::any_of(table.cells.begin(), table.cells.end(),
                               [](const auto& c) { return c.sensitivity.has_value(); });
  if (!any) {
    const auto& reason = table.cells.empty() ? std::string("no cells") : table.cells.front().reason;
    throw InvalidArgument("insufficient data for evaluation: " + reason);
  }

  const auto dir = output_dir(cfg);
  const Provenance prov{cfg.hash(), std::nullopt};
  std::ostringstream csv;
  write_sensitivity_csv(csv, table, prov);
  {
    auto f = open_out(dir / "sensitivity.csv");
    f << csv.str();
  }
  write_json(dir / "sensitivity.json", sensitivity_to_json(table, prov));
  out << csv.str();
  std::size_t empty = 0;
  for (const auto& c : table.cells) empty += !c.sensitivity;
  out << table.cells.size() << " cells, " << empty << " empty\n";
}

void cmd_synth(const SynthConfig& synth, const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  auto sc = synth;
  sc.seed = cfg.seed;
  const auto gen = generate(sc);
  const auto dir = output_dir(cfg);
  {
    auto f = open_out(dir / "scores.csv");
    f << provenance_comment({cfg.hash(), std::nullopt}) << '\n';
    write_score_csv(f, gen.scores.records());
  }
  write_json(dir / "truth.json", {{"provenance", provenance_json({cfg.hash(), std::nullopt})},
                                  {"n_subjects", sc.n_subjects},
                                  {"seed", sc.seed},
                                  {"planted", truth_to_json(gen.truth)}});
  out << "subjects " << sc.n_subjects << ", records " << gen.scores.size() << ", planted goat "
      << gen.truth.count(DrcCategory::Goat) << ", wolf_lamb " << gen.truth.count(DrcCategory::WolfLamb)
      << ", sheep " << gen.truth.count(DrcCategory::Sheep) << '\n';
}

void cmd_monitor(const std::string& scores_csv, const std::string& mutation_json,
                 const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto spec = read_json(mutation_json);
  const auto ops = parse_mutations(spec, fs::path(mutation_json).parent_path().string());

  const auto original_scores = read_score_csv(scores_csv);
  const auto original = build_full_landscape(original_scores, cfg.landscape_params());

  ScoreSet scores = original_scores;
  Landscape current = original;
  json steps = json::array();
  for (const auto& op : ops) {
    auto next = mutate_watchlist(current, scores, op);
    scores = std::move(next.scores);
    current = std::move(next.landscape);
    steps.push_back({{"op", describe(op)},
                     {"version", current.version},
                     {"subjects", current.assignment.universe()},
                     {"flagged_count", current.assignment.flagged_count}});
    out << "v" << current.version << ": " << describe(op) << " -> subjects "
        << current.assignment.universe() << ", flagged " << current.assignment.flagged_count << '\n';
  }

  json cells = json::array();
  for (std::size_t c = 0; c < kCellCount; ++c) {
    const auto key = cell_key(c);
    const double delta = mass_l1(original.cells[c], current.cells[c]);
    cells.push_back({{"category", to_string(key.category)},
                     {"quality", to_string(key.quality)},
                     {"kind", to_string(key.kind)},
                     {"l1_delta", delta},
                     {"samples_before", original.cells[c].sample_count},
                     {"samples_after", current.cells[c].sample_count}});
    out << to_string(key.category) << '/' << to_string(key.quality) << '/' << to_string(key.kind)
        << " l1_delta " << fixed6(delta) << '\n';
  }

  std::map<SubjectId, DrcCategory> before, after;
  for (std::size_t i = 0; i < original.assignment.subjects.size(); ++i)
    before[original.assignment.subjects[i]] = original.assignment.entries[i].category;
  for (std::size_t i = 0; i < current.assignment.subjects.size(); ++i)
    after[current.assignment.subjects[i]] = current.assignment.entries[i].category;
  json changes = json::array(), added = json::array(), removed = json::array();
  for (const auto& [id, cat] : before) {
    const auto it = after.find(id);
    if (it == after.end()) {
      removed.push_back(id);
    } else if (it->second != cat) {
      changes.push_back({{"subject", id}, {"before", to_string(cat)}, {"after", to_string(it->second)}});
      out << "category change: " << id << ' ' << to_string(cat) << " -> " << to_string(it->second) << '\n';
    }
  }
  for (const auto& [id, cat] : after)
    if (!before.count(id)) added.push_back(id);

  const auto dir = output_dir(cfg);
  const Provenance prov{cfg.hash(), current.version};
  write_json(dir / "monitor.json", {{"provenance", provenance_json(prov)},
                                    {"initial_version", original.version},
                                    {"final_version", current.version},
                                    {"steps", steps},
                                    {"cells", cells},
                                    {"category_changes", changes},
                                    {"added_subjects", added},
                                    {"removed_subjects", removed}});
  write_json(dir / "landscape.json", landscape_to_json(current, prov));
  out << "version " << current.version << '\n';
}

void cmd_plotdata(const std::string& landscape_json, const RunConfig& cfg, std::ostream& out) {
  const auto doc = landscape_from_json(read_json(landscape_json));
  const auto dir = output_dir(cfg);
  auto f = open_out(dir / "plotdata.csv");
  write_plotdata_csv(f, doc, {cfg.hash(), doc.version});
  std::size_t empty = 0;
  for (const auto& c : doc.cells) empty += c.empty();
  out << "wrote " << (dir / "plotdata.csv").string() << " (" << kCellCount - empty << " cells, "
      << empty << " empty)\n";
}

namespace {

struct Flags {
  std::string config_file;
  std::string percentile, bins, bandwidth, metrics, costs, classifiers, features, seed, out,
      epochs, lambda_reg;
  bool serial = false;
};

void add_common(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config_file, "JSON config file; flags override it");
  sub.add_option("--percentile", f.percentile, "Flagged fraction per category (default 0.025)");
  sub.add_option("--bins", f.bins, "Histogram bins over [0,1] (default 100)");
  sub.add_option("--bandwidth", f.bandwidth, "Kernel bandwidth or 'auto' (default auto)");
  sub.add_option("--metrics", f.metrics, "Comma-separated metric ids or 'all'");
  sub.add_option("--costs", f.costs, "Cost profile JSON path or 'default'");
  sub.add_option("--classifiers", f.classifiers, "Subset of min,margin (or 'none')");
  sub.add_option("--features", f.features, "per-kind-3 | combined-6");
  sub.add_option("--seed", f.seed, "Seed for training and synthesis");
  sub.add_option("--out", f.out, "Output directory (default .)");
  sub.add_option("--epochs", f.epochs, "Margin classifier epochs (default 200)");
  sub.add_option("--lambda-reg", f.lambda_reg, "Margin classifier regularization (default 1e-3)");
  sub.add_flag("--serial", f.serial, "Use the serial reference kernels");
}

template <class T>
T parse_number(const std::string& text, const char* flag) {
  std::istringstream ss(text);
  T v{};
  ss >> v;
  if (!ss || !ss.eof()) throw InvalidArgument(std::string(flag) + ": cannot parse '" + text + "'");
  return v;
}

RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  if (!f.config_file.empty()) cfg = RunConfig::from_json(read_json(f.config_file));
  if (!f.percentile.empty()) cfg.percentile = parse_number<double>(f.percentile, "--percentile");
  if (!f.bins.empty()) cfg.bins = parse_number<int>(f.bins, "--bins");
  if (!f.bandwidth.empty()) cfg.bandwidth = parse_bandwidth(f.bandwidth);
  if (!f.metrics.empty()) cfg.metrics = parse_metric_list(f.metrics);
  if (!f.costs.empty()) cfg.costs = f.costs;
  if (!f.classifiers.empty()) cfg.classifiers = parse_classifier_list(f.classifiers);
  if (!f.features.empty()) cfg.features = parse_feature_mode(f.features);
  if (!f.seed.empty()) cfg.seed = parse_number<std::uint64_t>(f.seed, "--seed");
  if (!f.out.empty()) cfg.out = f.out;
  if (!f.epochs.empty()) cfg.epochs = parse_number<int>(f.epochs, "--epochs");
  if (!f.lambda_reg.empty()) cfg.lambda_reg = parse_number<double>(f.lambda_reg, "--lambda-reg");
  if (f.serial) cfg.serial = true;
  cfg.validate();
  return cfg;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Watchlist risk assessment over biometric match-score landscapes", "watchlist"};
  app.require_subcommand(1);
  Flags flags;
  std::string scores, subject, mutations, landscape_file;
  SynthConfig synth;

  auto* landscape = app.add_subcommand("landscape", "Assign categories and build the landscape");
  landscape->add_option("scores", scores, "Score CSV")->required();
  add_common(*landscape, flags);

  auto* assess = app.add_subcommand("assess", "Risk report for one traveler");
  assess->add_option("scores", scores, "Score CSV")->required();
  assess->add_option("--subject", subject, "Traveler subject id")->required();
  add_common(*assess, flags);

  auto* evaluate = app.add_subcommand("evaluate", "Leave-one-out sensitivity table");
  evaluate->add_option("scores", scores, "Score CSV")->required();
  add_common(*evaluate, flags);

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic score set with planted truth");
  synth_cmd->add_option("--n", synth.n_subjects, "Number of subjects (default 200)");
  synth_cmd->add_option("--goat-frac", synth.goat_frac, "Planted goat fraction (default 0.025)");
  synth_cmd->add_option("--wolf-frac", synth.wolf_frac, "Planted wolf/lamb fraction (default 0.025)");
  synth_cmd->add_option("--samples", synth.samples_per_tier, "Samples per subject and tier (default 4)");
  add_common(*synth_cmd, flags);

  auto* monitor = app.add_subcommand("monitor", "Apply watchlist mutations and diff the landscape");
  monitor->add_option("scores", scores, "Score CSV")->required();
  monitor->add_option("mutations", mutations, "Mutation spec JSON")->required();
  add_common(*monitor, flags);

  auto* plot = app.add_subcommand("plotdata", "Per-cell distribution CSV from a landscape JSON");
  plot->add_option("landscape", landscape_file, "Landscape JSON")->required();
  add_common(*plot, flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const auto cfg = resolve(flags);
    if (landscape->parsed()) cmd_landscape(scores, cfg, out);
    else if (assess->parsed()) cmd_assess(scores, subject, cfg, out);
    else if (evaluate->parsed()) cmd_evaluate(scores, cfg, out);
    else if (synth_cmd->parsed()) cmd_synth(synth, cfg, out);
    else if (monitor->parsed()) cmd_monitor(scores, mutations, cfg, out);
    else if (plot->parsed()) cmd_plotdata(landscape_file, cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace watchlist
