#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "watchlist/scores.hpp"
#include "watchlist/synth.hpp"

namespace fixture {

using namespace watchlist;

inline ScoreRecord rec(const std::string& a, const std::string& b, QualityTier ta, QualityTier tb,
                       double score) {
  ScoreRecord r;
  r.subject_a = a;
  r.subject_b = b;
  r.tier_a = ta;
  r.tier_b = tb;
  r.raw_score = score;
  return r;
}

inline ScoreRecord hh(const std::string& a, const std::string& b, double score) {
  return rec(a, b, QualityTier::High, QualityTier::High, score);
}

inline ScoreRow row(std::size_t line, std::vector<std::string> fields) { return {line, std::move(fields)}; }

/// Small synthetic set; n subjects, default generator parameters.
inline SynthOutput synth(std::size_t n, std::uint64_t seed, std::size_t samples = 4) {
  SynthConfig c;
  c.n_subjects = n;
  c.seed = seed;
  c.samples_per_tier = samples;
  return generate(c);
}

/// Fresh scratch directory under the build tree's temp location.
inline std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("watchlist_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace fixture
