#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "urbanmix/calendar.hpp"
#include "urbanmix/ingest.hpp"
#include "urbanmix/random.hpp"
#include "urbanmix/sector_scaling.hpp"
#include "urbanmix/series.hpp"

// Synthetic stand-ins for the non-bundled inputs: hourly weather for a site
// in the central Netherlands, an evening-peaking household profile, and
// reference-building profiles that peak around midday. Shapes follow local
// clock time; all randomness comes from one seeded generator.

namespace urbanmix::synth {

struct Site {
  double latitude_deg = 52.1;
  double longitude_deg = 5.2;
};

/// File name stem for a building type: lower case, runs of other characters
/// replaced by '_'.
inline std::string slug(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!out.empty() && out.back() != '_') {
      out.push_back('_');
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

namespace detail {

inline double day_of_year(std::size_t hour) {
  return static_cast<double>(hour) / 24.0;
}

/// Cosine of the solar zenith angle at the middle of UTC hour `hour`.
inline double cos_zenith(std::size_t hour, const Site& site) {
  constexpr double pi = std::numbers::pi;
  const double doy = day_of_year(hour) + 1.0;
  const double gamma = 2.0 * pi / 365.0 * (doy - 1.0);
  const double decl = 0.006918 - 0.399912 * std::cos(gamma) + 0.070257 * std::sin(gamma) -
                      0.006758 * std::cos(2 * gamma) + 0.000907 * std::sin(2 * gamma);
  const double utc_hours = std::fmod(static_cast<double>(hour), 24.0) + 0.5;
  const double solar_time = utc_hours + site.longitude_deg / 15.0;
  const double hour_angle = (solar_time - 12.0) * pi / 12.0;
  const double lat = site.latitude_deg * pi / 180.0;
  return std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Smooth 0..1 window that is 1 between `open` and `close` (local hours)
/// with one-hour ramps.
inline double window(double h, double open, double close) {
  const double rise = std::clamp(h - open + 1.0, 0.0, 1.0);
  const double fall = std::clamp(close - h, 0.0, 1.0);
  return std::min(rise, fall);
}

inline double bump(double h, double centre, double width) {
  const double d = (h - centre) / width;
  return std::exp(-0.5 * d * d);
}

}  // namespace detail

/// Hourly weather: clear-sky irradiance times an autocorrelated clearness
/// index, seasonal and diurnal temperature, autocorrelated pressure, and
/// Weibull-distributed 10 m wind speeds with hour-to-hour persistence.
inline std::vector<WeatherRecord> weather(const Calendar& cal, std::uint64_t seed, const Site& site = {}) {
  constexpr double pi = std::numbers::pi;
  Rng rng(seed);
  std::vector<WeatherRecord> out(cal.hour_count());
  double cloud = 0.0, temp_noise = 0.0, pressure_noise = 0.0, wind_z = 0.0;
  for (std::size_t h = 0; h < out.size(); ++h) {
    cloud = 0.92 * cloud + std::sqrt(1 - 0.92 * 0.92) * rng.normal();
    temp_noise = 0.95 * temp_noise + std::sqrt(1 - 0.95 * 0.95) * rng.normal();
    pressure_noise = 0.98 * pressure_noise + std::sqrt(1 - 0.98 * 0.98) * rng.normal();
    wind_z = 0.9 * wind_z + std::sqrt(1 - 0.9 * 0.9) * rng.normal();

    const double doy = detail::day_of_year(h);
    const double cz = detail::cos_zenith(h, site);
    double ghi = 0.0;
    if (cz > 0.0) {
      const double clear = 1098.0 * cz * std::exp(-0.057 / cz);
      const double kt = std::clamp(0.55 + 0.28 * cloud, 0.08, 0.95);
      ghi = clear * kt;
    }
    const double local_hour = cal.local_time(h).hour;
    const double temp = 10.0 - 7.0 * std::cos(2 * pi * (doy - 20.0) / 365.0) +
                        3.0 * std::cos(2 * pi * (local_hour - 15.0) / 24.0) + 2.5 * temp_noise;
    const double pressure = 101300.0 + 900.0 * pressure_noise;
    const double scale = 5.3 + 0.6 * std::cos(2 * pi * (doy - 15.0) / 365.0);
    const double u = std::clamp(detail::normal_cdf(wind_z), 1e-12, 1.0 - 1e-12);
    const double wind = scale * std::sqrt(-std::log1p(-u));

    out[h] = WeatherRecord{h, ghi, temp, pressure, wind};
  }
  return out;
}

/// Household weights: morning shoulder, evening peak, higher in winter.
inline HourlySeries household_weights(const Calendar& cal, std::uint64_t seed) {
  constexpr double pi = std::numbers::pi;
  static constexpr std::array<double, 24> shape = {0.55, 0.48, 0.45, 0.44, 0.45, 0.52, 0.72, 0.95,
                                                   1.04, 1.02, 1.0,  1.02, 1.05, 1.02, 1.0,  1.02,
                                                   1.02, 1.15, 1.3,  1.3,  1.15, 1.0,  0.86, 0.7};
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<double> w(cal.hour_count());
  for (std::size_t h = 0; h < w.size(); ++h) {
    const auto lt = cal.local_time(h);
    const double doy = static_cast<double>(h) / 24.0;
    const double season = 1.0 + 0.18 * std::cos(2 * pi * (doy - 15.0) / 365.0);
    double v = shape[static_cast<std::size_t>(lt.hour)];
    if (cal.day_kind(h) == DayKind::weekend && lt.hour >= 8 && lt.hour < 16) v *= 1.12;
    w[h] = v * season * (1.0 + 0.04 * rng.normal());
  }
  return HourlySeries(std::move(w), Unit::weight, cal.year());
}

/// Daily shape and annual consumption of one reference building.
struct BuildingShape {
  double annual_kwh = 0.0;
  double base = 0.3;        // fraction of peak when closed
  double open = 8.0;        // local hour
  double close = 18.0;
  double evening_peak = 0;  // extra weight of an evening bump around 20:00
  double weekend = 0.4;     // weekend/holiday activity relative to weekdays
  double summer_break = 1;  // activity during July and August
};

inline std::map<std::string, BuildingShape> default_building_shapes() {
  return {
      {"Hospital", {10.0e6, 0.65, 8, 22, 0.0, 0.9, 1.0}},
      {"Large Hotel", {3.0e6, 0.5, 6, 23, 1.0, 1.0, 1.0}},
      {"Small Hotel", {0.4e6, 0.45, 6, 23, 1.0, 1.0, 1.0}},
      {"Large Office", {6.0e6, 0.25, 8, 21, 0.0, 0.3, 1.0}},
      {"Medium Office", {0.8e6, 0.25, 8, 21, 0.0, 0.25, 1.0}},
      {"Small Office", {0.07e6, 0.2, 8, 19, 0.0, 0.2, 1.0}},
      {"Primary School", {0.5e6, 0.2, 8, 17, 0.0, 0.2, 0.3}},
      {"Secondary School", {1.8e6, 0.2, 8, 18, 0.0, 0.2, 0.3}},
      {"Stand Alone Retail", {0.3e6, 0.2, 10, 22, 0.9, 0.8, 1.0}},
      {"Supermarket", {1.5e6, 0.5, 8, 22, 0.6, 0.9, 1.0}},
      {"Restaurant", {0.2e6, 0.2, 11, 23, 2.0, 1.1, 1.0}},
      {"Quick Service Restaurant", {0.12e6, 0.25, 10, 23, 1.6, 1.1, 1.0}},
      {"Warehouse", {0.3e6, 0.3, 7, 20, 0.0, 0.4, 1.0}},
  };
}

/// Hourly kW of one reference building, normalised to its annual energy.
inline HourlySeries reference_profile(const Calendar& cal, const BuildingShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> w(cal.hour_count());
  for (std::size_t h = 0; h < w.size(); ++h) {
    const auto lt = cal.local_time(h);
    const double hour = lt.hour + 0.5;
    double v = shape.base + (1.0 - shape.base) * detail::window(hour, shape.open, shape.close);
    v += shape.evening_peak * detail::bump(hour, 20.0, 1.8) * detail::window(hour, shape.open, shape.close);
    if (cal.day_kind(h) == DayKind::weekend) v = shape.base + (v - shape.base) * shape.weekend;
    const unsigned month = static_cast<unsigned>(lt.date.month());
    if (month == 7 || month == 8) v = shape.base + (v - shape.base) * shape.summer_break;
    w[h] = v * (1.0 + 0.03 * rng.normal());
  }
  return normalize_profile(HourlySeries(std::move(w), Unit::weight, cal.year()), shape.annual_kwh);
}

struct FixtureOptions {
  std::uint64_t seed = 2014;
  double households = 100000.0;
  double household_annual_kwh = 3500.0;
  Site site;
};

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

/// Writes a complete input directory (calendar, scaling spec, weather,
/// household weights, reference profiles, config.json) for `cal`.
inline std::filesystem::path write_fixture(const std::filesystem::path& dir, const Calendar& cal,
                                           const nlohmann::json& scaling_spec, const FixtureOptions& opt = {}) {
  std::filesystem::create_directories(dir / "profiles");
  write_json(dir / "calendar.json", calendar_to_json(cal));
  write_json(dir / "scaling.json", scaling_spec);
  write_weather(dir / "weather.csv", weather(cal, opt.seed, opt.site));
  write_series(dir / "household.csv", household_weights(cal, opt.seed + 1), "weight");

  const auto shapes = default_building_shapes();
  std::uint64_t k = 0;
  for (const auto& b : scaling_spec.at("buildings")) {
    const auto name = b.at("name").get<std::string>();
    auto it = shapes.find(name);
    const BuildingShape shape = it == shapes.end() ? BuildingShape{0.3e6} : it->second;
    write_series(dir / "profiles" / (slug(name) + ".csv"), reference_profile(cal, shape, opt.seed + 100 + k++), "kw");
  }

  nlohmann::json config = {
      {"calendar", "calendar.json"},
      {"weather", "weather.csv"},
      {"household_profile", "household.csv"},
      {"reference_profiles_dir", "profiles"},
      {"scaling_spec", "scaling.json"},
      {"households", opt.households},
      {"household_annual_kwh", opt.household_annual_kwh},
      {"seed", 42},
      {"sweep", {{"max_mw", 525.0}, {"step_mw", 52.5}, {"alpha", 0.05}, {"t_test", "welch"}}},
      {"experiment2", {{"pv_mw", 399.0}, {"wind_mw", 30.0}, {"use_optimizer", false}}},
      {"optimizer",
       {{"weights", {{"pos", 1.0}, {"neg", 1.0}, {"ren", -5.0}}},
        {"sign", "magnitude-neg"},
        {"load_case", "mixed"},
        {"grid_resolution", 0}}},
      {"national_check",
       {{"households_total", 7.59e6},
        {"references_twh", {{"PBL", 33.6}, {"CBS", 30.6}}},
        {"expected_twh", 26.9},
        {"real_inputs", false}}},
  };
  write_json(dir / "config.json", config);
  return dir / "config.json";
}

}  // namespace urbanmix::synth
