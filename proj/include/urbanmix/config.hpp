#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "urbanmix/calendar.hpp"
#include "urbanmix/error.hpp"
#include "urbanmix/generation.hpp"
#include "urbanmix/optimize.hpp"
#include "urbanmix/stats.hpp"

namespace urbanmix {

struct SweepConfig {
  double max_mw = 525.0;
  double step_mw = 52.5;
  double alpha = 0.05;
  stats::Variance variance = stats::Variance::welch;
};

struct Experiment2Config {
  double pv_mw = 399.0;
  double wind_mw = 30.0;
  bool use_optimizer = false;
};

struct OptimizerConfig {
  opt::Weights weights;
  opt::SignConvention sign = opt::SignConvention::magnitude_neg;
  opt::GaConfig ga;
  std::string load_case = "mixed";
  std::size_t grid_resolution = 0;  // 0 disables the grid cross-check
};

/// Published national service-sector totals used as external references.
struct NationalCheckConfig {
  double households_total = 7.59e6;
  std::map<std::string, double> references_twh = {{"PBL", 33.6}, {"CBS", 30.6}};
  double expected_twh = 26.9;
  bool real_inputs = false;
};

/// Main run configuration. Relative paths are resolved against the directory
/// of the config file.
struct Config {
  std::filesystem::path base_dir;
  std::filesystem::path calendar;
  std::filesystem::path weather;
  std::filesystem::path household_profile;
  std::filesystem::path reference_profiles_dir;
  std::filesystem::path scaling_spec;
  double households = 100000.0;
  double household_annual_kwh = 3500.0;
  gen::TurbineParams turbine;
  gen::PvParams pv;
  gen::AreaBudget area;
  SweepConfig sweep;
  Experiment2Config experiment2;
  OptimizerConfig optimizer;
  NationalCheckConfig national;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  nlohmann::json raw;
};

namespace detail {

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace detail

inline Config config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  Config c;
  c.base_dir = base_dir;
  c.raw = j;
  auto path = [&](const char* key) -> std::filesystem::path {
    if (!j.contains(key)) throw ConfigError(std::string("config: missing '") + key + "'");
    std::filesystem::path p = j.at(key).get<std::string>();
    return p.is_absolute() ? p : base_dir / p;
  };
  try {
    c.calendar = path("calendar");
    c.weather = path("weather");
    c.household_profile = path("household_profile");
    c.reference_profiles_dir = path("reference_profiles_dir");
    c.scaling_spec = path("scaling_spec");
    detail::read_opt(j, "households", c.households);
    detail::read_opt(j, "household_annual_kwh", c.household_annual_kwh);
    detail::read_opt(j, "seed", c.seed);
    if (j.contains("turbine")) {
      const auto& t = j.at("turbine");
      detail::read_opt(t, "hub_height_m", c.turbine.hub_height_m);
      detail::read_opt(t, "rotor_area_m2", c.turbine.rotor_area_m2);
      detail::read_opt(t, "cp", c.turbine.cp);
      detail::read_opt(t, "cut_in_ms", c.turbine.cut_in_ms);
      detail::read_opt(t, "cut_out_ms", c.turbine.cut_out_ms);
      detail::read_opt(t, "nominal_power_kw", c.turbine.nominal_power_kw);
      detail::read_opt(t, "shear_exponent", c.turbine.shear_exponent);
      detail::read_opt(t, "measurement_height_m", c.turbine.measurement_height_m);
    }
    if (j.contains("pv")) {
      const auto& p = j.at("pv");
      detail::read_opt(p, "rated_power_density_w_m2", c.pv.rated_power_density_w_m2);
      detail::read_opt(p, "temp_coefficient_per_c", c.pv.temp_coefficient_per_c);
      detail::read_opt(p, "noct_offset_c", c.pv.noct_offset_c);
      detail::read_opt(p, "panel_area_m2", c.pv.panel_area_m2);
      const std::string model = p.value("model", "linear-derate");
      if (model == "linear-derate") {
        c.pv.model = gen::PvModel::linear_derate;
      } else if (model == "single-diode") {
        c.pv.model = gen::PvModel::single_diode;
      } else {
        throw ConfigError("config: unknown PV model '" + model + "'");
      }
    }
    if (j.contains("area")) {
      const auto& a = j.at("area");
      detail::read_opt(a, "household_roof_m2", c.area.household_roof_m2_each);
      detail::read_opt(a, "phi_area", c.area.phi_area);
      detail::read_opt(a, "turbine_footprint_km2_per_mw", c.area.turbine_footprint_km2_per_mw);
      detail::read_opt(a, "roof_only_pv", c.area.roof_only_pv);
    }
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      detail::read_opt(s, "max_mw", c.sweep.max_mw);
      detail::read_opt(s, "step_mw", c.sweep.step_mw);
      detail::read_opt(s, "alpha", c.sweep.alpha);
      const std::string t = s.value("t_test", "welch");
      if (t == "welch") {
        c.sweep.variance = stats::Variance::welch;
      } else if (t == "pooled") {
        c.sweep.variance = stats::Variance::pooled;
      } else {
        throw ConfigError("config: unknown t_test '" + t + "'");
      }
    }
    if (j.contains("experiment2")) {
      const auto& e = j.at("experiment2");
      detail::read_opt(e, "pv_mw", c.experiment2.pv_mw);
      detail::read_opt(e, "wind_mw", c.experiment2.wind_mw);
      detail::read_opt(e, "use_optimizer", c.experiment2.use_optimizer);
    }
    if (j.contains("optimizer")) {
      const auto& o = j.at("optimizer");
      if (o.contains("weights")) {
        detail::read_opt(o.at("weights"), "pos", c.optimizer.weights.pos);
        detail::read_opt(o.at("weights"), "neg", c.optimizer.weights.neg);
        detail::read_opt(o.at("weights"), "ren", c.optimizer.weights.ren);
      }
      const std::string sign = o.value("sign", "magnitude-neg");
      if (sign == "magnitude-neg") {
        c.optimizer.sign = opt::SignConvention::magnitude_neg;
      } else if (sign == "signed-neg") {
        c.optimizer.sign = opt::SignConvention::signed_neg;
      } else {
        throw ConfigError("config: unknown sign convention '" + sign + "'");
      }
      detail::read_opt(o, "load_case", c.optimizer.load_case);
      detail::read_opt(o, "grid_resolution", c.optimizer.grid_resolution);
      if (o.contains("ga")) {
        const auto& g = o.at("ga");
        detail::read_opt(g, "population", c.optimizer.ga.population);
        detail::read_opt(g, "tournament", c.optimizer.ga.tournament);
        detail::read_opt(g, "crossover_rate", c.optimizer.ga.crossover_rate);
        detail::read_opt(g, "blend_alpha", c.optimizer.ga.blend_alpha);
        detail::read_opt(g, "mutation_rate", c.optimizer.ga.mutation_rate);
        detail::read_opt(g, "mutation_sigma", c.optimizer.ga.mutation_sigma);
        detail::read_opt(g, "elites", c.optimizer.ga.elites);
        detail::read_opt(g, "stall_generations", c.optimizer.ga.stall_generations);
        detail::read_opt(g, "tolerance", c.optimizer.ga.tolerance);
        detail::read_opt(g, "max_generations", c.optimizer.ga.max_generations);
      }
    }
    if (j.contains("national_check")) {
      const auto& n = j.at("national_check");
      detail::read_opt(n, "households_total", c.national.households_total);
      detail::read_opt(n, "expected_twh", c.national.expected_twh);
      detail::read_opt(n, "real_inputs", c.national.real_inputs);
      if (n.contains("references_twh")) {
        c.national.references_twh = n.at("references_twh").get<std::map<std::string, double>>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(c.households > 0.0)) throw ConfigError("config: households must be positive");
  c.turbine.validate();
  c.pv.validate();
  return c;
}

inline Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j, std::filesystem::absolute(path).parent_path());
}

}  // namespace urbanmix
