#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace watchlist {

using SubjectId = std::string;

enum class QualityTier { High, Low };
enum class ComparisonQuality { HQ, LQ, VQ };
enum class ComparisonKind { Genuine, Impostor };

/// Operational Doddington categories; wolves and lambs are merged.
enum class DrcCategory { Sheep, Goat, WolfLamb };

inline constexpr std::array<ComparisonQuality, 3> kQualities{
    ComparisonQuality::HQ, ComparisonQuality::LQ, ComparisonQuality::VQ};
inline constexpr std::array<ComparisonKind, 2> kKinds{ComparisonKind::Genuine,
                                                      ComparisonKind::Impostor};
/// Column order used by every export: goat, wolf_lamb, sheep.
inline constexpr std::array<DrcCategory, 3> kCategories{
    DrcCategory::Goat, DrcCategory::WolfLamb, DrcCategory::Sheep};

constexpr std::size_t index(QualityTier t) { return static_cast<std::size_t>(t); }
constexpr std::size_t index(ComparisonQuality q) { return static_cast<std::size_t>(q); }
constexpr std::size_t index(ComparisonKind k) { return static_cast<std::size_t>(k); }
constexpr std::size_t index(DrcCategory c) { return static_cast<std::size_t>(c); }

/// Fixed-size map keyed by DrcCategory.
template <class T>
struct CategoryMap {
  std::array<T, 3> values{};

  T& operator[](DrcCategory c) { return values[index(c)]; }
  const T& operator[](DrcCategory c) const { return values[index(c)]; }
  bool operator==(const CategoryMap&) const = default;
};

constexpr ComparisonQuality pair_quality(QualityTier a, QualityTier b) {
  if (a != b) return ComparisonQuality::VQ;
  return a == QualityTier::High ? ComparisonQuality::HQ : ComparisonQuality::LQ;
}

/// Higher-cost categories win ties: WolfLamb > Goat > Sheep.
constexpr int cost_rank(DrcCategory c) {
  switch (c) {
    case DrcCategory::WolfLamb: return 2;
    case DrcCategory::Goat: return 1;
    case DrcCategory::Sheep: return 0;
  }
  return 0;
}

std::string_view to_string(QualityTier t);
std::string_view to_string(ComparisonQuality q);
std::string_view to_string(ComparisonKind k);
std::string_view to_string(DrcCategory c);

// Parsers are case-insensitive and throw InvalidArgument on unknown labels.
QualityTier parse_tier(std::string_view s);
ComparisonQuality parse_quality(std::string_view s);
ComparisonKind parse_kind(std::string_view s);
DrcCategory parse_category(std::string_view s);

}  // namespace watchlist
