#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "urbanmix/error.hpp"

// Reference-building equivalents for service-sector consumer types.
//
// A local consumer type k is represented by a number of reference buildings
// whose hourly profile is known. The number follows from a ratio of a
// building-use quantity measured locally and in the reference building
// (beds, rooms, floor area, students, employees). National equivalents are
// then expressed per 100 000 households.

namespace urbanmix::scaling {

enum class Method { count_ratio, total_area, office_bands, warehouse_energy_employees, direct_count };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::count_ratio: return "count-ratio";
    case Method::total_area: return "total-area";
    case Method::office_bands: return "office-bands";
    case Method::warehouse_energy_employees: return "warehouse-energy-employees";
    case Method::direct_count: return "direct-count";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  for (Method m : {Method::count_ratio, Method::total_area, Method::office_bands, Method::warehouse_energy_employees,
                   Method::direct_count}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown scaling method '" + std::string(s) + "'");
}

struct Quantity {
  double value = 0.0;
  std::string unit;
};

/// Intermediate values as printed in the source tables, kept alongside the
/// recipe so both arithmetic paths can be compared.
struct PrintedValues {
  std::optional<double> national;  // reference-building equivalents, whole country
  std::optional<long> per_100k;    // as printed next to the national value
};

struct BreakdownItem {
  std::string label;
  double count = 0.0;
};

struct BuildingScalingSpec {
  std::string name;
  Method method = Method::direct_count;
  std::map<std::string, Quantity> inputs;
  double roof_area_m2 = 0.0;
  PrintedValues printed;
  std::optional<long> expected_count;     // published count per 100 000 households
  std::vector<BreakdownItem> breakdown;   // direct-count: components of the count

  [[nodiscard]] const Quantity& input(const std::string& field) const {
    auto it = inputs.find(field);
    if (it == inputs.end()) {
      throw ConfigError(name + " (" + std::string(to_string(method)) + "): missing input '" + field + "'");
    }
    return it->second;
  }
};

/// Office size class. An open-ended top class needs an assumed average area.
struct OfficeBand {
  double min_m2 = 0.0;
  std::optional<double> max_m2;
  double share_pct = 0.0;
  std::optional<double> assumed_average_m2;
  std::optional<double> printed_count;
  std::optional<double> printed_area_m2;

  [[nodiscard]] double average_m2() const {
    if (assumed_average_m2) return *assumed_average_m2;
    if (!max_m2) throw ValidationError("open-ended office band needs an assumed average area");
    return 0.5 * (min_m2 + *max_m2);
  }
};

struct BandCount {
  double average_m2 = 0.0;
  double count = 0.0;
  double area_m2 = 0.0;
};

/// Region-level data shared by several building types.
struct ScalingContext {
  std::string region;
  double households_divisor = 75.9;  // national households / 100 000
  std::vector<OfficeBand> office_bands;
  double office_total_used_area_m2 = 0.0;
};

struct ScalingSpecFile {
  ScalingContext context;
  std::vector<BuildingScalingSpec> buildings;
};

struct MixEntry {
  std::string building_type;
  long count = 0;
};

/// Reference-building counts per 100 000 households.
struct ServiceMix {
  std::vector<MixEntry> entries;

  [[nodiscard]] long count(std::string_view type) const {
    for (const auto& e : entries) {
      if (e.building_type == type) return e.count;
    }
    return 0;
  }
};

/// Rounds to the nearest integer, halves away from zero.
inline double round_half_away(double x) { return std::round(x); }

inline double count_ratio_equivalents(double local_count, double x_local, double x_reference) {
  if (!(x_reference > 0.0)) throw ValidationError("reference quantity must be positive");
  return local_count * (x_local / x_reference);
}

inline double area_equivalents(double total_local_area, double reference_area) {
  if (!(reference_area > 0.0)) throw ValidationError("reference area must be positive");
  return total_local_area / reference_area;
}

/// Splits a total floor area over size bands so that band counts follow the
/// shares and the band areas add up to the total:
/// N = total / sum(share_j * avg_j), n_j = share_j * N.
inline std::vector<BandCount> office_band_counts(const std::vector<OfficeBand>& bands, double total_used_area) {
  double share_sum = 0.0;
  double weighted_avg = 0.0;
  for (const auto& b : bands) {
    if (b.share_pct < 0.0) throw ValidationError("negative office band share");
    share_sum += b.share_pct;
    weighted_avg += b.share_pct / 100.0 * b.average_m2();
  }
  if (std::abs(share_sum - 100.0) > 0.1) {
    throw ValidationError("office band shares sum to " + std::to_string(share_sum) + "%, expected 100%");
  }
  if (!(weighted_avg > 0.0)) throw ValidationError("office bands have zero average area");
  const double total_count = total_used_area / weighted_avg;
  std::vector<BandCount> out;
  out.reserve(bands.size());
  for (const auto& b : bands) {
    const double n = b.share_pct / 100.0 * total_count;
    out.push_back({b.average_m2(), n, n * b.average_m2()});
  }
  return out;
}

inline double warehouse_equivalents(double sector_consumption, double per_building, double employees_local,
                                    double employees_ref) {
  if (!(sector_consumption > 0.0) || !(per_building > 0.0) || !(employees_local > 0.0) || !(employees_ref > 0.0)) {
    throw ValidationError("warehouse scaling inputs must be positive");
  }
  return (sector_consumption / per_building) * (employees_local / employees_ref);
}

inline long per_100k(double national_equivalents, double households_divisor = 75.9) {
  if (national_equivalents < 0.0) throw ValidationError("negative number of equivalents");
  if (!(households_divisor > 0.0)) throw ValidationError("household divisor must be positive");
  return static_cast<long>(round_half_away(national_equivalents / households_divisor));
}

namespace detail {

inline void require_same_unit(const BuildingScalingSpec& s, const Quantity& a, const Quantity& b) {
  if (a.unit != b.unit) {
    throw ConfigError(s.name + ": local and reference inputs use different units ('" + a.unit + "' vs '" + b.unit +
                      "')");
  }
}

inline double positive(const BuildingScalingSpec& s, const std::string& field) {
  const double v = s.input(field).value;
  if (!(v > 0.0)) throw ValidationError(s.name + ": input '" + field + "' must be positive");
  return v;
}

}  // namespace detail

/// Floor area of the office bands selected by `first_band`..`last_band`
/// (0-based, inclusive), either recomputed from the shares or as printed.
inline double office_band_area(const BuildingScalingSpec& s, const ScalingContext& ctx, bool use_printed) {
  const auto first = static_cast<std::size_t>(s.input("first_band").value);
  const auto last = static_cast<std::size_t>(s.input("last_band").value);
  if (first > last || last >= ctx.office_bands.size()) {
    throw ConfigError(s.name + ": office band range out of bounds");
  }
  double area = 0.0;
  if (use_printed) {
    for (std::size_t j = first; j <= last; ++j) {
      if (!ctx.office_bands[j].printed_area_m2) throw ConfigError(s.name + ": band has no printed area");
      area += *ctx.office_bands[j].printed_area_m2;
    }
    return area;
  }
  const auto counts = office_band_counts(ctx.office_bands, ctx.office_total_used_area_m2);
  for (std::size_t j = first; j <= last; ++j) area += counts[j].area_m2;
  return area;
}

/// National reference-building equivalents recomputed from the recipe's
/// inputs (no printed intermediates), before rounding.
inline double national_equivalents(const BuildingScalingSpec& s, const ScalingContext& ctx) {
  switch (s.method) {
    case Method::count_ratio: {
      detail::require_same_unit(s, s.input("local_quantity"), s.input("reference_quantity"));
      return count_ratio_equivalents(detail::positive(s, "local_count"), detail::positive(s, "local_quantity"),
                                     detail::positive(s, "reference_quantity"));
    }
    case Method::total_area: {
      detail::require_same_unit(s, s.input("local_total"), s.input("reference_size"));
      return area_equivalents(s.input("local_total").value, detail::positive(s, "reference_size"));
    }
    case Method::office_bands:
      return area_equivalents(office_band_area(s, ctx, false), detail::positive(s, "reference_area"));
    case Method::warehouse_energy_employees: {
      detail::require_same_unit(s, s.input("sector_consumption"), s.input("per_building"));
      detail::require_same_unit(s, s.input("employees_local"), s.input("employees_ref"));
      return warehouse_equivalents(s.input("sector_consumption").value, s.input("per_building").value,
                                   s.input("employees_local").value, s.input("employees_ref").value);
    }
    case Method::direct_count: {
      if (!s.breakdown.empty()) {
        double total = 0.0;
        for (const auto& b : s.breakdown) total += b.count;
        return total;
      }
      const double n = s.input("count").value;
      if (n < 0.0) throw ValidationError(s.name + ": negative count");
      return n;
    }
  }
  throw ConfigError(s.name + ": unknown method");
}

enum class Path { printed, recomputed };

/// National equivalents as used for the mix: the printed intermediate when the
/// recipe carries one and `path` is printed, otherwise the recomputed value
/// rounded to a whole building.
inline double resolved_national(const BuildingScalingSpec& s, const ScalingContext& ctx, Path path) {
  if (path == Path::printed && s.printed.national) return *s.printed.national;
  return round_half_away(national_equivalents(s, ctx));
}

inline ServiceMix build_service_mix(const std::vector<BuildingScalingSpec>& specs, const ScalingContext& ctx,
                                    Path path = Path::printed) {
  ServiceMix mix;
  mix.entries.reserve(specs.size());
  for (const auto& s : specs) {
    mix.entries.push_back({s.name, per_100k(resolved_national(s, ctx, path), ctx.households_divisor)});
  }
  return mix;
}

/// Roof area per building type, for area budgets.
inline std::map<std::string, double> roof_areas(const std::vector<BuildingScalingSpec>& specs) {
  std::map<std::string, double> out;
  for (const auto& s : specs) out[s.name] = s.roof_area_m2;
  return out;
}

// ---------------------------------------------------------------------------
// Spec file I/O

inline ScalingSpecFile scaling_spec_from_json(const nlohmann::json& j) {
  auto opt_num = [](const nlohmann::json& o, const char* key) -> std::optional<double> {
    if (!o.contains(key) || o.at(key).is_null()) return std::nullopt;
    return o.at(key).get<double>();
  };
  try {
    ScalingSpecFile f;
    f.context.region = j.value("region", "");
    f.context.households_divisor = j.value("households_divisor", 75.9);
    if (j.contains("office_bands")) {
      const auto& ob = j.at("office_bands");
      f.context.office_total_used_area_m2 = ob.at("total_used_area_m2").get<double>();
      for (const auto& b : ob.at("bands")) {
        OfficeBand band;
        band.min_m2 = b.at("min_m2").get<double>();
        band.max_m2 = opt_num(b, "max_m2");
        band.share_pct = b.at("share_pct").get<double>();
        band.assumed_average_m2 = opt_num(b, "assumed_average_m2");
        band.printed_count = opt_num(b, "printed_count");
        band.printed_area_m2 = opt_num(b, "printed_area_m2");
        f.context.office_bands.push_back(band);
      }
    }
    for (const auto& b : j.at("buildings")) {
      BuildingScalingSpec s;
      s.name = b.at("name").get<std::string>();
      s.method = parse_method(b.at("method").get<std::string>());
      for (const auto& [key, q] : b.at("inputs").items()) {
        s.inputs[key] = Quantity{q.at("value").get<double>(), q.value("unit", "")};
      }
      s.roof_area_m2 = b.at("roof_area_m2").get<double>();
      if (!(s.roof_area_m2 > 0.0)) throw ValidationError(s.name + ": roof area must be positive");
      if (b.contains("printed")) {
        const auto& p = b.at("printed");
        s.printed.national = opt_num(p, "national");
        if (p.contains("per_100k")) s.printed.per_100k = p.at("per_100k").get<long>();
      }
      if (b.contains("expected_count")) s.expected_count = b.at("expected_count").get<long>();
      if (b.contains("breakdown")) {
        for (const auto& item : b.at("breakdown")) {
          s.breakdown.push_back({item.at("label").get<std::string>(), item.at("count").get<double>()});
        }
      }
      f.buildings.push_back(std::move(s));
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scaling spec: ") + e.what());
  }
}

inline ScalingSpecFile load_scaling_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scaling spec " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scaling spec " + path.string() + ": " + e.what());
  }
  return scaling_spec_from_json(j);
}

}  // namespace urbanmix::scaling
