#pragma once

#include <map>
#include <string>

#include "urbanmix/error.hpp"
#include "urbanmix/sector_scaling.hpp"
#include "urbanmix/series.hpp"

namespace urbanmix::demand {

enum class LoadKind { residential_only, mixed };

inline std::string_view to_string(LoadKind k) { return k == LoadKind::residential_only ? "residential" : "mixed"; }

struct LoadCase {
  LoadKind kind = LoadKind::mixed;
  HourlySeries series;  // kW
  double phi = 1.0;     // residential scale factor; 1 for the mixed case
  double annual_energy_kwh = 0.0;
};

/// s(t) = sum_k count_k * profile_k(t)
inline HourlySeries synthesize_service_profile(const scaling::ServiceMix& mix,
                                               const std::map<std::string, HourlySeries>& reference_profiles,
                                               int year) {
  std::vector<double> total(hours_in_year(year), 0.0);
  for (const auto& e : mix.entries) {
    auto it = reference_profiles.find(e.building_type);
    if (it == reference_profiles.end()) {
      throw ValidationError("no reference profile for building type '" + e.building_type + "'");
    }
    const HourlySeries& p = it->second;
    if (p.year() != year || p.size() != total.size()) {
      throw ValidationError("reference profile '" + e.building_type + "' does not match calendar year");
    }
    if (e.count == 0) continue;
    const HourlySeries kw = p.in(Unit::kW);
    for (std::size_t h = 0; h < total.size(); ++h) total[h] += static_cast<double>(e.count) * kw[h];
  }
  return HourlySeries(std::move(total), Unit::kW, year);
}

inline double compute_phi(double mixed_annual, double household_annual) {
  if (!(household_annual > 0.0)) throw ValidationError("household annual energy must be positive");
  return mixed_annual / household_annual;
}

/// L_r(t) = phi * h(t)
inline LoadCase residential_case(const HourlySeries& household, double phi) {
  if (phi < 0.0) throw ValidationError("phi must be non-negative");
  auto series = household.scaled(phi);
  const double annual = series.sum();
  return LoadCase{LoadKind::residential_only, std::move(series), phi, annual};
}

/// L_m(t) = h(t) + s(t)
inline LoadCase mixed_case(const HourlySeries& household, const HourlySeries& service) {
  require_same_shape(household, service, "mixed load");
  auto series = household.in(Unit::kW) + service.in(Unit::kW);
  const double annual = series.sum();
  return LoadCase{LoadKind::mixed, std::move(series), 1.0, annual};
}

/// Both load cases built from the same inputs, with phi chosen so their
/// annual energies agree.
struct LoadCases {
  HourlySeries household;
  HourlySeries service;
  double phi = 1.0;
  LoadCase residential;
  LoadCase mixed;
};

inline LoadCases build_load_cases(const HourlySeries& household, const HourlySeries& service) {
  LoadCases out;
  out.household = household.in(Unit::kW);
  out.service = service.in(Unit::kW);
  out.mixed = mixed_case(out.household, out.service);
  out.phi = compute_phi(out.mixed.annual_energy_kwh, out.household.sum());
  out.residential = residential_case(out.household, out.phi);
  return out;
}

}  // namespace urbanmix::demand
