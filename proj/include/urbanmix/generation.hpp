#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "urbanmix/error.hpp"
#include "urbanmix/ingest.hpp"
#include "urbanmix/sector_scaling.hpp"
#include "urbanmix/series.hpp"

namespace urbanmix::gen {

inline constexpr double kDryAirGasConstant = 287.05;  // J/(kg K)
inline constexpr double kBetzLimit = 16.0 / 27.0;

/// Community-size 500 kW turbine (52/54 m class).
struct TurbineParams {
  double hub_height_m = 50.0;
  double rotor_area_m2 = 2290.0;
  double cp = 0.35;
  double cut_in_ms = 2.5;
  double cut_out_ms = 25.0;
  double nominal_power_kw = 500.0;
  double shear_exponent = 0.15;
  double measurement_height_m = 10.0;

  void validate() const {
    if (!(cp > 0.0 && cp < kBetzLimit)) throw ValidationError("turbine cp must lie in (0, 0.593)");
    if (!(cut_in_ms < cut_out_ms)) throw ValidationError("turbine cut-in must be below cut-out");
    if (!(hub_height_m > 0 && rotor_area_m2 > 0 && cut_in_ms > 0 && nominal_power_kw > 0 && shear_exponent > 0 &&
          measurement_height_m > 0)) {
      throw ValidationError("turbine parameters must be positive");
    }
  }
};

enum class PvModel { linear_derate, single_diode };

/// Single-diode module description (defaults: 36-cell 60 W polycrystalline
/// module).
struct DiodeParams {
  double isc_a = 3.8;
  double voc_v = 21.1;
  int cells_in_series = 36;
  double isc_temp_coeff_per_c = 0.00065;  // relative, 1/degC
  double ideality = 1.3;
  double band_gap_ev = 1.12;
  double series_resistance_ohm = 0.18;
};

struct PvParams {
  double rated_power_density_w_m2 = 60.0 / (1.108 * 0.502);  // 60 W on a 1108 x 502 mm module
  double temp_coefficient_per_c = -0.005;
  double noct_offset_c = 27.0;  // NOCT 47 degC minus 20 degC ambient at 800 W/m2
  double panel_area_m2 = 1.108 * 0.502;
  PvModel model = PvModel::linear_derate;
  DiodeParams diode;

  void validate() const {
    if (!(rated_power_density_w_m2 > 0.0)) throw ValidationError("PV rated power density must be positive");
    if (!(panel_area_m2 > 0.0)) throw ValidationError("PV panel area must be positive");
    if (temp_coefficient_per_c > 0.0) throw ValidationError("PV temperature coefficient must be <= 0");
  }
};

struct AreaBudget {
  double household_roof_m2_each = 33.0;
  std::map<std::string, double> service_roofs;
  double phi_area = 3.0;
  double turbine_footprint_km2_per_mw = 0.345;
  bool roof_only_pv = false;
};

struct AreaTotals {
  double roof_m2 = 0.0;
  double pv_limit_m2 = 0.0;
  double wind_limit_m2 = 0.0;
  double total_limit_m2 = 0.0;
};

/// Ideal-gas density of dry air.
inline double air_density(double temp_c, double pressure_pa) {
  if (!(temp_c > -90.0)) throw ValidationError("temperature below -90 degC");
  if (!(pressure_pa > 0.0)) throw ValidationError("pressure must be positive");
  return pressure_pa / (kDryAirGasConstant * (temp_c + 273.15));
}

inline double hub_height_speed(double v10, const TurbineParams& p) {
  return v10 * std::pow(p.hub_height_m / p.measurement_height_m, p.shear_exponent);
}

/// Output of one turbine in kW for a 10 m wind speed and air density:
/// 1/2 rho A V^3 Cp at hub height, zero outside the operating range, capped at
/// nominal power.
inline double wind_power_at(double v10, double rho, const TurbineParams& p) {
  if (v10 < 0.0) throw ValidationError("negative wind speed");
  const double v = hub_height_speed(v10, p);
  if (v < p.cut_in_ms || v > p.cut_out_ms) return 0.0;
  const double kw = 0.5 * rho * p.rotor_area_m2 * v * v * v * p.cp / 1000.0;
  return std::min(kw, p.nominal_power_kw);
}

inline double wind_power(const WeatherRecord& r, const TurbineParams& p) {
  validate(r);
  return wind_power_at(r.wind_speed_10m, air_density(r.temp, r.pressure), p);
}

inline double cell_temperature(double ghi, double temp_c, const PvParams& p) {
  return temp_c + p.noct_offset_c * (ghi / 800.0);
}

namespace detail {

inline constexpr double kBoltzmann = 1.380649e-23;
inline constexpr double kElementaryCharge = 1.602176634e-19;

/// Current at terminal voltage v for the single-diode equation
/// I = Iph - I0 (exp((V + I Rs) / Vt) - 1), by damped Newton iteration.
inline double diode_current(double v, double iph, double i0, double vt, double rs) {
  double i = iph;
  for (int it = 0; it < 100; ++it) {
    const double e = std::exp(std::min((v + i * rs) / vt, 700.0));
    const double f = iph - i - i0 * (e - 1.0);
    const double df = -1.0 - i0 * e * rs / vt;
    const double step = f / df;
    i -= step;
    if (std::abs(step) < 1e-12) break;
  }
  return i;
}

/// Maximum power point of one module in W.
inline double single_diode_mpp(double ghi, double t_cell_c, const DiodeParams& d) {
  if (ghi <= 0.0) return 0.0;
  const double t_ref = 298.15;
  const double t = t_cell_c + 273.15;
  const double vt_ref = d.ideality * kBoltzmann * t_ref / kElementaryCharge * d.cells_in_series;
  const double vt = d.ideality * kBoltzmann * t / kElementaryCharge * d.cells_in_series;
  const double iph = d.isc_a * (ghi / 1000.0) * (1.0 + d.isc_temp_coeff_per_c * (t - t_ref));
  const double i0_ref = d.isc_a / (std::exp(d.voc_v / vt_ref) - 1.0);
  const double i0 = i0_ref * std::pow(t / t_ref, 3.0 / d.ideality) *
                    std::exp(-d.band_gap_ev / (d.ideality * kBoltzmann / kElementaryCharge) * (1.0 / t - 1.0 / t_ref));
  if (iph <= 0.0) return 0.0;
  const double voc = vt * std::log(iph / i0 + 1.0);
  auto power = [&](double v) { return v * std::max(0.0, diode_current(v, iph, i0, vt, d.series_resistance_ohm)); };
  // P(V) is unimodal on [0, Voc]; golden-section search.
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = voc;
  double c = b - g * (b - a), e = a + g * (b - a);
  double pc = power(c), pe = power(e);
  for (int it = 0; it < 200 && b - a > 1e-9; ++it) {
    if (pc > pe) {
      b = e, e = c, pe = pc;
      c = b - g * (b - a), pc = power(c);
    } else {
      a = c, c = e, pc = pe;
      e = a + g * (b - a), pe = power(e);
    }
  }
  return power(0.5 * (a + b));
}

}  // namespace detail

/// PV output in W per m2 of panel, clamped to [0, rated power density].
inline double pv_power_at(double ghi, double temp_c, const PvParams& p) {
  if (ghi <= 0.0) return 0.0;
  const double t_cell = cell_temperature(ghi, temp_c, p);
  double w = 0.0;
  if (p.model == PvModel::linear_derate) {
    w = p.rated_power_density_w_m2 * (ghi / 1000.0) * (1.0 + p.temp_coefficient_per_c * (t_cell - 25.0));
  } else {
    w = detail::single_diode_mpp(ghi, t_cell, p.diode) / p.panel_area_m2;
  }
  return std::clamp(w, 0.0, p.rated_power_density_w_m2);
}

inline double pv_power(const WeatherRecord& r, const PvParams& p) {
  validate(r);
  return pv_power_at(r.ghi, r.temp, p);
}

inline HourlySeries pv_unit_series(const std::vector<WeatherRecord>& weather, const PvParams& p, int year) {
  p.validate();
  std::vector<double> v(weather.size());
  for (std::size_t h = 0; h < weather.size(); ++h) v[h] = pv_power(weather[h], p);
  return HourlySeries(std::move(v), Unit::W_per_m2, year);
}

inline HourlySeries wind_unit_series(const std::vector<WeatherRecord>& weather, const TurbineParams& p, int year) {
  p.validate();
  std::vector<double> v(weather.size());
  for (std::size_t h = 0; h < weather.size(); ++h) v[h] = wind_power(weather[h], p);
  return HourlySeries(std::move(v), Unit::kW_per_turbine, year);
}

inline long turbine_count(double cap_wind_mw, const TurbineParams& t) {
  if (cap_wind_mw < 0.0) throw ValidationError("negative wind capacity");
  return std::lround(cap_wind_mw / (t.nominal_power_kw / 1000.0));
}

/// Total generation in MW for installed capacities (MW): PV panel area is
/// capacity / rated power density; wind capacity is rounded to whole turbines.
inline HourlySeries scenario_generation(double cap_pv_mw, double cap_wind_mw, const HourlySeries& pv_unit,
                                        const HourlySeries& wind_unit, const PvParams& pv, const TurbineParams& turbine) {
  if (cap_pv_mw < 0.0 || cap_wind_mw < 0.0) throw ValidationError("negative installed capacity");
  require_same_shape(pv_unit, wind_unit, "scenario generation");
  const double pv_area_m2 = cap_pv_mw * 1e6 / pv.rated_power_density_w_m2;
  const double turbines = static_cast<double>(turbine_count(cap_wind_mw, turbine));
  std::vector<double> g(pv_unit.size());
  for (std::size_t h = 0; h < g.size(); ++h) {
    g[h] = pv_area_m2 * pv_unit[h] * 1e-6 + turbines * wind_unit[h] * 1e-3;
  }
  return HourlySeries(std::move(g), Unit::MW, pv_unit.year());
}

/// Roof area of households and service buildings, and the resulting area
/// limits for PV and wind siting.
inline AreaTotals area_budget_totals(const scaling::ServiceMix& mix, double n_households, const AreaBudget& budget) {
  if (n_households < 0.0) throw ValidationError("negative household count");
  AreaTotals t;
  t.roof_m2 = n_households * budget.household_roof_m2_each;
  for (const auto& e : mix.entries) {
    if (e.count < 0) throw ValidationError("negative building count for " + e.building_type);
    if (e.count == 0) continue;
    auto it = budget.service_roofs.find(e.building_type);
    if (it == budget.service_roofs.end()) throw ValidationError("no roof area for " + e.building_type);
    t.roof_m2 += static_cast<double>(e.count) * it->second;
  }
  t.total_limit_m2 = budget.phi_area * t.roof_m2;
  t.pv_limit_m2 = budget.roof_only_pv ? t.roof_m2 : t.total_limit_m2;
  t.wind_limit_m2 = (budget.phi_area - 1.0) * t.roof_m2;
  return t;
}

/// Footprint of one turbine in m2.
inline double turbine_footprint_m2(const AreaBudget& budget, const TurbineParams& t) {
  return budget.turbine_footprint_km2_per_mw * 1e6 * (t.nominal_power_kw / 1000.0);
}

}  // namespace urbanmix::gen
