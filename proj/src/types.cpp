#include "watchlist/types.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "watchlist/error.hpp"

namespace watchlist {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(QualityTier t) {
  return t == QualityTier::High ? "high" : "low";
}

std::string_view to_string(ComparisonQuality q) {
  switch (q) {
    case ComparisonQuality::HQ: return "hq";
    case ComparisonQuality::LQ: return "lq";
    case ComparisonQuality::VQ: return "vq";
  }
  return "?";
}

std::string_view to_string(ComparisonKind k) {
  return k == ComparisonKind::Genuine ? "genuine" : "impostor";
}

std::string_view to_string(DrcCategory c) {
  switch (c) {
    case DrcCategory::Sheep: return "sheep";
    case DrcCategory::Goat: return "goat";
    case DrcCategory::WolfLamb: return "wolf_lamb";
  }
  return "?";
}

QualityTier parse_tier(std::string_view s) {
  const auto v = lower(s);
  if (v == "high") return QualityTier::High;
  if (v == "low") return QualityTier::Low;
  throw InvalidArgument("unknown tier label '" + std::string(s) + "'");
}

ComparisonQuality parse_quality(std::string_view s) {
  const auto v = lower(s);
  if (v == "hq" || v == "high") return ComparisonQuality::HQ;
  if (v == "lq" || v == "low") return ComparisonQuality::LQ;
  if (v == "vq" || v == "various") return ComparisonQuality::VQ;
  throw InvalidArgument("unknown quality '" + std::string(s) + "'");
}

ComparisonKind parse_kind(std::string_view s) {
  const auto v = lower(s);
  if (v == "genuine") return ComparisonKind::Genuine;
  if (v == "impostor") return ComparisonKind::Impostor;
  throw InvalidArgument("unknown comparison kind '" + std::string(s) + "'");
}

DrcCategory parse_category(std::string_view s) {
  const auto v = lower(s);
  if (v == "sheep") return DrcCategory::Sheep;
  if (v == "goat") return DrcCategory::Goat;
  if (v == "wolf_lamb" || v == "wolflamb") return DrcCategory::WolfLamb;
  throw InvalidArgument("unknown category '" + std::string(s) + "'");
}

}  // namespace watchlist
