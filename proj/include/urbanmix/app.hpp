#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "urbanmix/config.hpp"
#include "urbanmix/csv.hpp"
#include "urbanmix/demand.hpp"
#include "urbanmix/experiments.hpp"
#include "urbanmix/generation.hpp"
#include "urbanmix/metrics.hpp"
#include "urbanmix/optimize.hpp"
#include "urbanmix/sector_scaling.hpp"
#include "urbanmix/validation.hpp"

// Subcommand bodies shared by the CLI and the acceptance suite. Each returns
// the process exit code: 0 success, 2 validation failure. I/O and config
// problems surface as exceptions and map to exit code 1 in the caller.

namespace urbanmix::app {

inline constexpr int kOk = 0;
inline constexpr int kIoError = 1;
inline constexpr int kValidationFailure = 2;

struct GlobalOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";
  unsigned parallel = 1;
};

inline Config load(const GlobalOptions& g) {
  Config c = load_config(g.config);
  if (g.seed) c.seed = *g.seed;
  c.workers = std::max(1u, g.parallel);
  c.optimizer.ga.seed = c.seed;
  c.optimizer.ga.workers = c.workers;
  return c;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

inline int cmd_scale(const GlobalOptions& g, std::ostream& log) {
  const Config c = load(g);
  auto spec = scaling::load_scaling_spec(c.scaling_spec);
  spec.context.households_divisor = exp::households_divisor(c);
  const auto printed = scaling::build_service_mix(spec.buildings, spec.context, scaling::Path::printed);
  const auto recomputed = scaling::build_service_mix(spec.buildings, spec.context, scaling::Path::recomputed);
  csv::Writer w(g.out / "service_mix.csv",
                {"building_type", "count", "count_recomputed_path", "national_equivalents", "roof_area_m2"});
  for (std::size_t i = 0; i < spec.buildings.size(); ++i) {
    const auto& b = spec.buildings[i];
    w.row({b.name, std::to_string(printed.entries[i].count), std::to_string(recomputed.entries[i].count),
           csv::format(scaling::resolved_national(b, spec.context, scaling::Path::printed)),
           csv::format(b.roof_area_m2)});
  }
  const auto report = validation::reconcile_appendix(spec);
  validation::write_reconciliation_csv(report, g.out / "reconciliation.csv");
  std::ostringstream text;
  validation::write_reconciliation_text(report, text);
  write_text(g.out / "reconciliation.txt", text.str());
  log << "service mix per " << csv::fixed(c.households, 0) << " households:\n";
  for (const auto& e : printed.entries) log << "  " << e.building_type << ": " << e.count << '\n';
  log << '\n' << text.str();
  int mismatches = 0;
  for (std::size_t i = 0; i < spec.buildings.size(); ++i) {
    const auto& expected = spec.buildings[i].expected_count;
    if (c.households == 100000.0 && expected && *expected != printed.entries[i].count) ++mismatches;
  }
  if (mismatches) {
    log << mismatches << " building type(s) differ from the expected counts\n";
    return kValidationFailure;
  }
  return kOk;
}

inline int cmd_profiles(const GlobalOptions& g, std::ostream& log) {
  const Config c = load(g);
  const auto in = exp::load_inputs(c);
  const auto& L = in.loads;
  csv::Writer w(g.out / "load_profiles.csv", {"hour", "household_kw", "service_kw", "residential_kw", "mixed_kw"});
  for (std::size_t h = 0; h < L.household.size(); ++h) {
    w.row({std::to_string(h), csv::format(L.household[h]), csv::format(L.service[h]),
           csv::format(L.residential.series[h]), csv::format(L.mixed.series[h])});
  }
  csv::Writer s(g.out / "load_summary.csv", {"quantity", "value"});
  s.row({"phi", csv::format(L.phi)});
  s.row({"household_annual_kwh", csv::format(L.household.sum())});
  s.row({"service_annual_kwh", csv::format(L.service.sum())});
  s.row({"residential_annual_kwh", csv::format(L.residential.annual_energy_kwh)});
  s.row({"mixed_annual_kwh", csv::format(L.mixed.annual_energy_kwh)});
  s.row({"residential_peak_kw", csv::format(L.residential.series.max())});
  s.row({"mixed_peak_kw", csv::format(L.mixed.series.max())});
  log << "phi = " << csv::fixed(L.phi, 5) << "; peaks: residential " << csv::fixed(L.residential.series.max() / 1000, 1)
      << " MW, mixed " << csv::fixed(L.mixed.series.max() / 1000, 1) << " MW\n";
  return kOk;
}

inline int cmd_generation(const GlobalOptions& g, std::ostream& log) {
  const Config c = load(g);
  const auto cal = load_calendar(c.calendar.string());
  const auto weather = load_weather(c.weather, cal);
  const auto pv = gen::pv_unit_series(weather, c.pv, cal.year());
  const auto wind = gen::wind_unit_series(weather, c.turbine, cal.year());
  write_series(g.out / "pv_unit.csv", pv, "w_per_m2");
  write_series(g.out / "wind_unit.csv", wind, "kw_per_turbine");
  log << "PV: " << csv::fixed(pv.sum() / 1000.0, 1) << " kWh/m2/yr; turbine: " << csv::fixed(wind.sum() / 1000.0, 1)
      << " MWh/yr (capacity factor " << csv::fixed(wind.sum() / (c.turbine.nominal_power_kw * wind.size()), 3)
      << ")\n";
  return kOk;
}

inline int cmd_sweep(const GlobalOptions& g, std::ostream& log) {
  const Config c = load(g);
  const auto in = exp::load_inputs(c);
  const auto grid = exp::run_experiment1(in, c);
  exp::write_experiment1(grid, g.out);
  log << "sweep: " << grid.cells.size() << " scenarios, phi = " << csv::fixed(in.loads.phi, 5) << '\n';
  return kOk;
}

inline nlohmann::json solution_json(const opt::MixSolution& s, const opt::MixProblem& p) {
  auto terms = [](const opt::ObjectiveTerms& t) {
    return nlohmann::json{{"pos_mismatch_mwh", t.pos_mismatch},
                          {"neg_mismatch_mwh", t.neg_mismatch},
                          {"utilisation_mwh", t.utilisation},
                          {"objective", t.value}};
  };
  const double turbine_m2 = s.turbine_m2_rounded;
  return {{"pv_area_m2", s.x.pv_m2},
          {"turbine_area_m2", s.x.turbine_m2},
          {"pv_mw", s.pv_mw},
          {"turbines_continuous", s.turbines_continuous},
          {"turbines", s.turbines},
          {"wind_mw", static_cast<double>(s.turbines) * p.turbine_nominal_kw / 1000.0},
          {"slack_pv_m2", p.pv_max() - s.x.pv_m2},
          {"slack_turbine_m2", p.turbine_max() - turbine_m2},
          {"slack_total_m2", p.total_max() - s.x.pv_m2 - turbine_m2},
          {"continuous", terms(s.continuous)},
          {"rounded", terms(s.rounded)},
          {"generations", s.generations},
          {"evaluations", s.evaluations}};
}

inline int cmd_optimize(const GlobalOptions& g, std::ostream& log) {
  const Config c = load(g);
  const auto in = exp::load_inputs(c);
  const auto p = exp::mix_problem(in, c, exp::parse_load_kind(c.optimizer.load_case));
  const auto s = opt::ga_optimize(p, c.optimizer.ga);
  nlohmann::json report = {{"seed", c.seed},
                           {"sign_convention", std::string(opt::to_string(p.sign))},
                           {"weights", {{"pos", p.weights.pos}, {"neg", p.weights.neg}, {"ren", p.weights.ren}}},
                           {"roof_area_m2", p.roof_area_m2},
                           {"turbine_footprint_m2", p.turbine_footprint_m2},
                           {"load_case", c.optimizer.load_case},
                           {"ga", solution_json(s, p)},
                           {"config", c.raw}};
  bool ok = opt::feasible({s.x.pv_m2, s.turbine_m2_rounded}, p);
  if (c.optimizer.grid_resolution >= 2) {
    const auto o = opt::grid_oracle(p, c.optimizer.grid_resolution, c.workers);
    report["grid_oracle"] = solution_json(o, p);
    report["grid_resolution"] = c.optimizer.grid_resolution;
    const double gap = (s.continuous.value - o.continuous.value) / std::abs(o.continuous.value);
    report["relative_gap"] = gap;
    log << "grid oracle objective " << csv::format(o.continuous.value) << " (GA gap " << csv::fixed(100 * gap, 3)
        << "%)\n";
  }
  write_text(g.out / "optimize_report.json", report.dump(2) + "\n");
  csv::Writer w(g.out / "optimize_solution.csv", {"quantity", "value"});
  const auto solution = solution_json(s, p);
  for (const auto& [key, value] : solution.items()) {
    if (value.is_number()) w.row({key, csv::format(value.get<double>())});
  }
  log << "optimum: " << csv::fixed(s.pv_mw, 1) << " MW PV (" << csv::fixed(s.x.pv_m2, 0) << " m2), " << s.turbines
      << " turbines; objective " << csv::format(s.continuous.value) << " after " << s.generations << " generations\n";
  return ok ? kOk : kValidationFailure;
}

inline int cmd_classify(const GlobalOptions& g, std::ostream& log) {
  const Config c = load(g);
  const auto in = exp::load_inputs(c);
  double pv = c.experiment2.pv_mw;
  double wind = c.experiment2.wind_mw;
  if (c.experiment2.use_optimizer) {
    const auto p = exp::mix_problem(in, c, exp::parse_load_kind(c.optimizer.load_case));
    const auto s = opt::ga_optimize(p, c.optimizer.ga);
    pv = s.pv_mw;
    wind = static_cast<double>(s.turbines) * c.turbine.nominal_power_kw / 1000.0;
  }
  const auto t = exp::run_experiment2(in, c, pv, wind);
  exp::write_experiment2(t, g.out);
  const auto d = exp::directional_checks(t);
  log << "mix: " << csv::fixed(pv, 1) << " MW PV, " << csv::fixed(wind, 1) << " MW wind\n"
      << "weekday day utilisation (MWh): residential " << csv::fixed(d.weekday_day_utilisation[0], 0) << ", mixed "
      << csv::fixed(d.weekday_day_utilisation[1], 0) << '\n'
      << "weekday evening |negative mismatch| (MWh): residential " << csv::fixed(d.weekday_evening_neg_abs[0], 0)
      << ", mixed " << csv::fixed(d.weekday_evening_neg_abs[1], 0) << '\n';
  return kOk;
}

/// Fixture battery: appendix reconciliation, the national total, and metric
/// identities on the configured inputs.
inline int cmd_validate(const GlobalOptions& g, std::ostream& log) {
  const Config c = load(g);
  const auto in = exp::load_inputs(c);
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    log << (ok ? "ok   " : "FAIL ") << what << '\n';
    if (!ok) ++failures;
  };

  const auto report = validation::reconcile_appendix(in.scaling);
  validation::write_reconciliation_csv(report, g.out / "reconciliation.csv");
  for (const auto& b : report.buildings) {
    if (b.table_count && c.households == 100000.0) {
      const auto count = in.mix.count(b.name);
      check(count == *b.table_count,
            b.name + ": count " + std::to_string(count) + " vs table " + std::to_string(*b.table_count));
    }
  }
  log << "reconciliation: " << report.buildings.size() << " building types, " << report.inconsistencies().size()
      << " flagged as paper-internal inconsistencies\n";

  const auto national = validation::national_total_check(in.loads.service, c.households, c.national.households_total,
                                                         c.national.references_twh, c.national.expected_twh,
                                                         c.national.real_inputs);
  validation::write_national_csv(national, g.out / "national_check.csv");
  log << "national service demand " << csv::fixed(national.modeled_twh, 2) << " TWh (" << national.status << ")\n";
  if (!national.skipped) {
    check(std::abs(national.modeled_twh - national.expected_twh) <= 0.02 * national.expected_twh,
          "national total within 2% of " + csv::format(national.expected_twh) + " TWh");
  }

  check(std::abs(in.loads.residential.annual_energy_kwh - in.loads.mixed.annual_energy_kwh) <=
            1e-9 * in.loads.mixed.annual_energy_kwh,
        "residential and mixed annual energy agree");
  const auto gen_mid = gen::scenario_generation(c.experiment2.pv_mw, c.experiment2.wind_mw, in.pv_unit, in.wind_unit,
                                                c.pv, c.turbine);
  for (const auto* load : {&in.load_residential_mw, &in.load_mixed_mw}) {
    const auto a = metrics::evaluate(gen_mid, *load);
    const double balance = a.generation - a.load;
    check(std::abs(a.pos_mismatch + a.neg_mismatch - balance) <= 1e-9 * std::max(1.0, a.generation + a.load),
          "mismatch conservation");
    check(!a.self_consumption || (*a.self_consumption >= 0.0 && *a.self_consumption <= 1.0),
          "self-consumption within [0, 1]");
  }
  const auto dm = metrics::delta_mismatch(in.loads.service, in.loads.household, in.loads.phi);
  double worst = 0.0;
  const auto hr = metrics::hourly_metrics(gen_mid, in.load_residential_mw);
  const auto hm = metrics::hourly_metrics(gen_mid, in.load_mixed_mw);
  for (std::size_t h = 0; h < hr.size(); ++h) {
    worst = std::max(worst, std::abs((hr[h].mismatch - hm[h].mismatch) - dm[h] / 1000.0));
  }
  check(worst <= 1e-9 * std::max(1.0, in.load_mixed_mw.max()), "mismatch difference equals s - (phi - 1) h");
  log << (failures ? std::to_string(failures) + " check(s) failed\n" : std::string("all checks passed\n"));
  return failures ? kValidationFailure : kOk;
}

inline int cmd_fixture(const std::filesystem::path& dir, std::uint64_t seed, double households,
                       const std::filesystem::path& scaling_spec, std::ostream& log) {
  std::ifstream in(scaling_spec);
  if (!in) throw IoError("cannot open scaling spec " + scaling_spec.string());
  nlohmann::json spec;
  try {
    in >> spec;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scaling spec " + scaling_spec.string() + ": " + e.what());
  }
  const int year = 2014;
  synth::FixtureOptions opt;
  opt.seed = seed;
  opt.households = households;
  const auto config = synth::write_fixture(dir, dutch_calendar(year), spec, opt);
  log << "wrote synthetic inputs; config at " << config.string() << '\n';
  return kOk;
}

}  // namespace urbanmix::app
