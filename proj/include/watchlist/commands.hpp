#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "watchlist/config.hpp"
#include "watchlist/synth.hpp"

namespace watchlist {

// Each command writes its artifacts under cfg.out and a human summary to
// `out`. They throw watchlist::Error on failure; run_cli maps that to a
// nonzero exit status.

void cmd_landscape(const std::string& scores_csv, const RunConfig& cfg, std::ostream& out);
void cmd_assess(const std::string& scores_csv, const SubjectId& subject, const RunConfig& cfg,
                std::ostream& out);
void cmd_evaluate(const std::string& scores_csv, const RunConfig& cfg, std::ostream& out);
void cmd_synth(const SynthConfig& synth, const RunConfig& cfg, std::ostream& out);
void cmd_monitor(const std::string& scores_csv, const std::string& mutation_json,
                 const RunConfig& cfg, std::ostream& out);
void cmd_plotdata(const std::string& landscape_json, const RunConfig& cfg, std::ostream& out);

/// Parses `mutation_json` into an ordered list of watchlist mutations.
/// Relative `records_csv` paths resolve against `base_dir`.
std::vector<WatchlistMutation> parse_mutations(const nlohmann::json& j, const std::string& base_dir);

/// Full command-line entry point; returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace watchlist
