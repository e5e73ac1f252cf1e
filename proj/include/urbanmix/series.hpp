#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "urbanmix/error.hpp"

namespace urbanmix {

enum class Unit {
  kW,
  MW,
  W_per_m2,
  kW_per_turbine,
  m_per_s,
  degC,
  Pa,
  percent,
  weight,
  dimensionless,
};

inline std::string_view to_string(Unit u) {
  switch (u) {
    case Unit::kW: return "kW";
    case Unit::MW: return "MW";
    case Unit::W_per_m2: return "W/m2";
    case Unit::kW_per_turbine: return "kW/turbine";
    case Unit::m_per_s: return "m/s";
    case Unit::degC: return "degC";
    case Unit::Pa: return "Pa";
    case Unit::percent: return "%";
    case Unit::weight: return "weight";
    case Unit::dimensionless: return "-";
  }
  return "?";
}

inline bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

inline std::size_t hours_in_year(int year) { return is_leap_year(year) ? 8784 : 8760; }

/// One value per hour of a simulation year, indexed by UTC hour.
///
/// Values are immutable after construction; arithmetic helpers return new
/// series. Construction rejects non-finite values and a length that does not
/// match the calendar year.
class HourlySeries {
 public:
  HourlySeries() = default;

  HourlySeries(std::vector<double> values, Unit unit, int year)
      : values_(std::move(values)), unit_(unit), year_(year) {
    if (values_.size() != hours_in_year(year_)) {
      throw ValidationError("series for year " + std::to_string(year_) + " needs " +
                            std::to_string(hours_in_year(year_)) + " values, got " +
                            std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw ValidationError("non-finite value at hour " + std::to_string(i));
      }
    }
  }

  static HourlySeries constant(double value, Unit unit, int year) {
    return HourlySeries(std::vector<double>(hours_in_year(year), value), unit, year);
  }

  static HourlySeries zeros(Unit unit, int year) { return constant(0.0, unit, year); }

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] bool empty() const { return values_.empty(); }
  [[nodiscard]] Unit unit() const { return unit_; }
  [[nodiscard]] int year() const { return year_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double operator[](std::size_t hour) const { return values_[hour]; }
  [[nodiscard]] auto begin() const { return values_.begin(); }
  [[nodiscard]] auto end() const { return values_.end(); }

  [[nodiscard]] double sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

  [[nodiscard]] double max() const {
    double m = values_.empty() ? 0.0 : values_.front();
    for (double v : values_) m = v > m ? v : m;
    return m;
  }

  [[nodiscard]] double min() const {
    double m = values_.empty() ? 0.0 : values_.front();
    for (double v : values_) m = v < m ? v : m;
    return m;
  }

  [[nodiscard]] HourlySeries scaled(double factor) const { return scaled(factor, unit_); }

  [[nodiscard]] HourlySeries scaled(double factor, Unit unit) const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = values_[i] * factor;
    return HourlySeries(std::move(out), unit, year_);
  }

  /// Converts between power units (kW <-> MW). Other units pass through only
  /// when source and target agree.
  [[nodiscard]] HourlySeries in(Unit target) const {
    if (target == unit_) return *this;
    if (unit_ == Unit::kW && target == Unit::MW) return scaled(1e-3, Unit::MW);
    if (unit_ == Unit::MW && target == Unit::kW) return scaled(1e3, Unit::kW);
    throw ValidationError("cannot convert " + std::string(to_string(unit_)) + " to " +
                          std::string(to_string(target)));
  }

 private:
  std::vector<double> values_;
  Unit unit_ = Unit::dimensionless;
  int year_ = 1970;
};

inline void require_same_shape(const HourlySeries& a, const HourlySeries& b, std::string_view what) {
  if (a.size() != b.size() || a.year() != b.year()) {
    throw ValidationError(std::string(what) + ": series length mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
}

/// Pointwise a + b. Units must agree.
inline HourlySeries operator+(const HourlySeries& a, const HourlySeries& b) {
  require_same_shape(a, b, "add");
  if (a.unit() != b.unit()) throw ValidationError("add: unit mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return HourlySeries(std::move(out), a.unit(), a.year());
}

inline HourlySeries operator-(const HourlySeries& a, const HourlySeries& b) {
  require_same_shape(a, b, "subtract");
  if (a.unit() != b.unit()) throw ValidationError("subtract: unit mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return HourlySeries(std::move(out), a.unit(), a.year());
}

}  // namespace urbanmix
