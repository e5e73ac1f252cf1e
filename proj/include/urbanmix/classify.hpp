#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "urbanmix/calendar.hpp"
#include "urbanmix/error.hpp"

// Time-and-weather classification: every hour falls into one of
// 2 day kinds x 3 time bands x 5 solar bins x 5 wind bins = 150 categories.
// Solar and wind bins are quintiles of generation in percent of installed
// capacity.

namespace urbanmix::classify {

enum class TimeBand { night, day, evening };

inline constexpr std::size_t kDayKinds = 2;
inline constexpr std::size_t kTimeBands = 3;
inline constexpr std::size_t kBins = 5;
inline constexpr std::size_t kCategoryCount = kDayKinds * kTimeBands * kBins * kBins;

inline std::string_view to_string(TimeBand b) {
  switch (b) {
    case TimeBand::night: return "night";
    case TimeBand::day: return "day";
    case TimeBand::evening: return "evening";
  }
  return "?";
}

/// [00:00, 08:00) night, [08:00, 16:00) day, [16:00, 24:00) evening.
inline TimeBand time_band(int local_hour) {
  if (local_hour < 8) return TimeBand::night;
  if (local_hour < 16) return TimeBand::day;
  return TimeBand::evening;
}

struct CategoryKey {
  DayKind day_kind = DayKind::weekday;
  TimeBand time_band = TimeBand::night;
  int solar_bin = 1;  // 1..5
  int wind_bin = 1;   // 1..5

  [[nodiscard]] std::size_t index() const {
    return ((static_cast<std::size_t>(day_kind) * kTimeBands + static_cast<std::size_t>(time_band)) * kBins +
            static_cast<std::size_t>(solar_bin - 1)) *
               kBins +
           static_cast<std::size_t>(wind_bin - 1);
  }

  static CategoryKey from_index(std::size_t i) {
    CategoryKey k;
    k.wind_bin = static_cast<int>(i % kBins) + 1;
    i /= kBins;
    k.solar_bin = static_cast<int>(i % kBins) + 1;
    i /= kBins;
    k.time_band = static_cast<TimeBand>(i % kTimeBands);
    i /= kTimeBands;
    k.day_kind = static_cast<DayKind>(i);
    return k;
  }

  friend bool operator==(const CategoryKey&, const CategoryKey&) = default;
};

inline std::vector<CategoryKey> all_keys() {
  std::vector<CategoryKey> keys;
  keys.reserve(kCategoryCount);
  for (std::size_t i = 0; i < kCategoryCount; ++i) keys.push_back(CategoryKey::from_index(i));
  return keys;
}

/// Four inner quintile edges per resource, in percent of installed capacity.
struct BinEdges {
  std::array<double, 4> solar{};
  std::array<double, 4> wind{};

  void validate() const {
    for (const auto* edges : {&solar, &wind}) {
      for (std::size_t i = 0; i < 4; ++i) {
        if (!((*edges)[i] >= 0.0 && (*edges)[i] <= 100.0)) throw ValidationError("bin edge outside [0, 100]");
        if (i && (*edges)[i] < (*edges)[i - 1]) throw ValidationError("bin edges must be non-decreasing");
      }
    }
  }

  /// True when tied edges leave at least one bin empty by construction.
  [[nodiscard]] bool degenerate() const {
    for (const auto* edges : {&solar, &wind}) {
      for (std::size_t i = 1; i < 4; ++i) {
        if ((*edges)[i] == (*edges)[i - 1]) return true;
      }
    }
    return false;
  }
};

/// Percentile of a sorted sample by linear interpolation between order
/// statistics (position (n - 1) p).
inline double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ValidationError("percentile of empty sample");
  const double pos = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline std::array<double, 4> quintile_edges(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  return {percentile_sorted(sample, 0.2), percentile_sorted(sample, 0.4), percentile_sorted(sample, 0.6),
          percentile_sorted(sample, 0.8)};
}

/// Daylight hours: solar generation strictly positive.
inline std::vector<bool> daylight_mask(std::span<const double> solar_pct) {
  std::vector<bool> mask(solar_pct.size());
  for (std::size_t h = 0; h < solar_pct.size(); ++h) mask[h] = solar_pct[h] > 0.0;
  return mask;
}

/// Wind edges from all hours; solar edges from daylight hours only.
inline BinEdges compute_bins(std::span<const double> solar_pct, std::span<const double> wind_pct,
                             const std::vector<bool>& daylight) {
  if (solar_pct.size() != wind_pct.size() || daylight.size() != solar_pct.size()) {
    throw ValidationError("compute_bins: length mismatch");
  }
  for (std::size_t h = 0; h < solar_pct.size(); ++h) {
    if (!(solar_pct[h] >= 0.0 && solar_pct[h] <= 100.0 && wind_pct[h] >= 0.0 && wind_pct[h] <= 100.0)) {
      throw ValidationError("compute_bins: percentage outside [0, 100] at hour " + std::to_string(h));
    }
  }
  std::vector<double> day_solar;
  for (std::size_t h = 0; h < solar_pct.size(); ++h) {
    if (daylight[h]) day_solar.push_back(solar_pct[h]);
  }
  if (day_solar.empty()) throw ValidationError("compute_bins: no daylight hours");
  BinEdges e;
  e.solar = quintile_edges(std::move(day_solar));
  e.wind = quintile_edges(std::vector<double>(wind_pct.begin(), wind_pct.end()));
  e.validate();
  return e;
}

/// 1-based bin with half-open intervals: a value equal to an edge goes to the
/// upper bin; the top bin is closed at 100.
inline int bin_of(double value, const std::array<double, 4>& edges) {
  int bin = 1;
  for (double e : edges) {
    if (value >= e) ++bin;
  }
  return bin;
}

inline CategoryKey classify_hour(const Calendar& calendar, std::size_t hour, double solar_pct, double wind_pct,
                                 const BinEdges& edges) {
  return CategoryKey{calendar.day_kind(hour), time_band(calendar.local_time(hour).hour), bin_of(solar_pct, edges.solar),
                     bin_of(wind_pct, edges.wind)};
}

inline std::vector<CategoryKey> classify_year(const Calendar& calendar, std::span<const double> solar_pct,
                                              std::span<const double> wind_pct, const BinEdges& edges) {
  if (solar_pct.size() != calendar.hour_count() || wind_pct.size() != calendar.hour_count()) {
    throw ValidationError("classify: series length does not match calendar");
  }
  edges.validate();
  std::vector<CategoryKey> keys(solar_pct.size());
  for (std::size_t h = 0; h < keys.size(); ++h) keys[h] = classify_hour(calendar, h, solar_pct[h], wind_pct[h], edges);
  return keys;
}

struct CategoryStats {
  std::size_t hours = 0;    // member hours
  std::size_t defined = 0;  // member hours with a finite metric value
  double sum = 0.0;

  [[nodiscard]] double mean() const {
    return defined ? sum / static_cast<double>(defined) : std::numeric_limits<double>::quiet_NaN();
  }
};

/// Per-category hour count, sum and mean of a metric. NaN metric values
/// (undefined self-consumption) count as member hours but are left out of
/// sum and mean. Empty categories are reported with zero hours.
inline std::array<CategoryStats, kCategoryCount> aggregate_by_category(std::span<const CategoryKey> keys,
                                                                       std::span<const double> metric) {
  if (keys.size() != metric.size()) throw ValidationError("aggregate_by_category: length mismatch");
  std::array<CategoryStats, kCategoryCount> out{};
  for (std::size_t h = 0; h < keys.size(); ++h) {
    auto& s = out[keys[h].index()];
    ++s.hours;
    if (std::isfinite(metric[h])) {
      ++s.defined;
      s.sum += metric[h];
    }
  }
  return out;
}

/// Member hours of each category, in increasing hour order.
inline std::vector<std::vector<std::size_t>> category_members(std::span<const CategoryKey> keys) {
  std::vector<std::vector<std::size_t>> out(kCategoryCount);
  for (std::size_t h = 0; h < keys.size(); ++h) out[keys[h].index()].push_back(h);
  return out;
}

/// Hour counts by time band, solar bin, and wind bin (weekday and weekend
/// pooled).
using CountMatrix = std::array<std::array<std::array<std::size_t, kBins>, kBins>, kTimeBands>;

inline CountMatrix count_matrix(std::span<const CategoryKey> keys) {
  CountMatrix m{};
  for (const auto& k : keys) {
    ++m[static_cast<std::size_t>(k.time_band)][static_cast<std::size_t>(k.solar_bin - 1)]
       [static_cast<std::size_t>(k.wind_bin - 1)];
  }
  return m;
}

}  // namespace urbanmix::classify
