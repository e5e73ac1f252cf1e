#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "urbanmix/calendar.hpp"
#include "urbanmix/csv.hpp"
#include "urbanmix/error.hpp"
#include "urbanmix/series.hpp"

namespace urbanmix {

/// Weather observation for one UTC hour, in canonical units.
struct WeatherRecord {
  std::size_t hour_index = 0;
  double ghi = 0.0;             // W/m2
  double temp = 15.0;           // degC
  double pressure = 101325.0;   // Pa
  double wind_speed_10m = 0.0;  // m/s
};

inline void validate(const WeatherRecord& r) {
  const auto where = " at hour " + std::to_string(r.hour_index);
  if (!(r.ghi >= 0.0)) throw ValidationError("negative irradiance" + where);
  if (!(r.pressure > 0.0)) throw ValidationError("non-positive pressure" + where);
  if (!(r.wind_speed_10m >= 0.0)) throw ValidationError("negative wind speed" + where);
  if (!(r.temp > -90.0)) throw ValidationError("temperature below -90 degC" + where);
}

namespace detail {

/// Maps each data row onto its hour slot, rejecting out-of-range hours,
/// duplicates, and gaps. Returns slot -> row.
inline std::vector<std::size_t> index_rows(const csv::Table& t, std::size_t hours) {
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> slot(hours, unset);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const long h = t.integer(r, 0);
    if (h < 0 || static_cast<std::size_t>(h) >= hours) {
      throw ValidationError(t.path + ": hour " + std::to_string(h) + " out of range at row " +
                            std::to_string(t.line_of(r)));
    }
    if (slot[h] != unset) {
      throw ValidationError(t.path + ": duplicate timestamp for hour " + std::to_string(h) + " at row " +
                            std::to_string(t.line_of(r)));
    }
    slot[h] = r;
  }
  std::string gaps;
  std::size_t n_gaps = 0;
  for (std::size_t h = 0; h < hours; ++h) {
    if (slot[h] != unset) continue;
    if (n_gaps < 20) gaps += (gaps.empty() ? "" : ", ") + std::string("gap at hour ") + std::to_string(h);
    ++n_gaps;
  }
  if (n_gaps) {
    if (n_gaps > 20) gaps += ", ... (" + std::to_string(n_gaps) + " missing hours)";
    throw ValidationError(t.path + ": " + gaps);
  }
  return slot;
}

}  // namespace detail

/// Loads an hourly weather file (`hour_utc,ghi_wm2,temp_c,pressure_pa,wind_ms`)
/// and returns exactly one validated record per calendar hour, sorted.
inline std::vector<WeatherRecord> load_weather(const std::filesystem::path& path, const Calendar& calendar) {
  const auto t = csv::read(path, {"hour_utc", "ghi_wm2", "temp_c", "pressure_pa", "wind_ms"});
  const auto slot = detail::index_rows(t, calendar.hour_count());
  std::vector<WeatherRecord> out(slot.size());
  for (std::size_t h = 0; h < slot.size(); ++h) {
    const std::size_t r = slot[h];
    WeatherRecord rec{h, t.number(r, 1), t.number(r, 2), t.number(r, 3), t.number(r, 4)};
    try {
      validate(rec);
    } catch (const ValidationError& e) {
      throw ValidationError(t.path + ": " + e.what() + " (row " + std::to_string(t.line_of(r)) + ")");
    }
    out[h] = rec;
  }
  return out;
}

inline void write_weather(const std::filesystem::path& path, const std::vector<WeatherRecord>& records) {
  csv::Writer w(path, {"hour_utc", "ghi_wm2", "temp_c", "pressure_pa", "wind_ms"});
  for (const auto& r : records) {
    w.row({std::to_string(r.hour_index), csv::format(r.ghi), csv::format(r.temp), csv::format(r.pressure),
           csv::format(r.wind_speed_10m)});
  }
}

/// Reads a two-column hourly file with the given value column, without any
/// rescaling.
inline HourlySeries load_series(const std::filesystem::path& path, const std::string& value_column, Unit unit,
                                int year) {
  const auto t = csv::read(path, {"hour", value_column});
  const auto slot = detail::index_rows(t, hours_in_year(year));
  std::vector<double> v(slot.size());
  for (std::size_t h = 0; h < slot.size(); ++h) v[h] = t.number(slot[h], 1);
  return HourlySeries(std::move(v), unit, year);
}

inline void write_series(const std::filesystem::path& path, const HourlySeries& s, const std::string& value_column) {
  csv::Writer w(path, {"hour", value_column});
  for (std::size_t h = 0; h < s.size(); ++h) w.row({std::to_string(h), csv::format(s[h])});
}

/// Rescales non-negative hourly weights so that the 1-hour energy sum equals
/// `annual_energy_kwh`. Result is in kW.
inline HourlySeries normalize_profile(const HourlySeries& weights, double annual_energy_kwh) {
  if (!(annual_energy_kwh >= 0.0)) throw ValidationError("annual energy must be non-negative");
  for (std::size_t h = 0; h < weights.size(); ++h) {
    if (weights[h] < 0.0) throw ValidationError("negative profile weight at hour " + std::to_string(h));
  }
  const double total = weights.sum();
  if (!(total > 0.0)) throw ValidationError("profile weights are all zero; cannot normalize");
  return weights.scaled(annual_energy_kwh / total, Unit::kW);
}

/// Loads a demand profile given either as weights (`hour,weight`) or as
/// absolute power (`hour,kw`) and renormalizes it to the target annual
/// energy in kWh.
inline HourlySeries load_profile(const std::filesystem::path& path, double annual_energy_kwh, int year) {
  std::string column = "weight";
  {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string header;
    std::getline(in, header);
    if (csv::trim(header) == "hour,kw") column = "kw";
  }
  return normalize_profile(load_series(path, column, Unit::weight, year), annual_energy_kwh);
}

/// Loads a reference-building demand file (`hour,kw`) as absolute kW.
inline HourlySeries load_reference_profile(const std::filesystem::path& path, int year) {
  auto s = load_series(path, "kw", Unit::kW, year);
  for (std::size_t h = 0; h < s.size(); ++h) {
    if (s[h] < 0.0) throw ValidationError(path.string() + ": negative load at hour " + std::to_string(h));
  }
  return s;
}

}  // namespace urbanmix
