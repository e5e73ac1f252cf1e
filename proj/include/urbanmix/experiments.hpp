#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "urbanmix/calendar.hpp"
#include "urbanmix/classify.hpp"
#include "urbanmix/config.hpp"
#include "urbanmix/csv.hpp"
#include "urbanmix/demand.hpp"
#include "urbanmix/generation.hpp"
#include "urbanmix/ingest.hpp"
#include "urbanmix/metrics.hpp"
#include "urbanmix/optimize.hpp"
#include "urbanmix/parallel.hpp"
#include "urbanmix/sector_scaling.hpp"
#include "urbanmix/stats.hpp"
#include "urbanmix/synthetic.hpp"

namespace urbanmix::exp {

/// Everything the experiments need, loaded and derived once.
struct Inputs {
  Calendar calendar;
  std::vector<WeatherRecord> weather;
  scaling::ScalingSpecFile scaling;
  scaling::ServiceMix mix;
  std::map<std::string, HourlySeries> reference_profiles;  // kW per building
  demand::LoadCases loads;                                  // kW
  HourlySeries load_residential_mw;
  HourlySeries load_mixed_mw;
  HourlySeries pv_unit;    // W per m2
  HourlySeries wind_unit;  // kW per turbine
  gen::AreaTotals area;
};

/// Households represented by one count unit of the mix, as a divisor of
/// national equivalents.
inline double households_divisor(const Config& c) { return c.national.households_total / c.households; }

inline Inputs load_inputs(const Config& c) {
  Inputs in;
  in.calendar = load_calendar(c.calendar.string());
  const int year = in.calendar.year();
  in.weather = load_weather(c.weather, in.calendar);
  in.scaling = scaling::load_scaling_spec(c.scaling_spec);
  in.scaling.context.households_divisor = households_divisor(c);
  in.mix = scaling::build_service_mix(in.scaling.buildings, in.scaling.context, scaling::Path::printed);
  for (const auto& b : in.scaling.buildings) {
    const auto path = c.reference_profiles_dir / (synth::slug(b.name) + ".csv");
    if (!std::filesystem::exists(path)) throw IoError("missing reference profile for " + b.name + ": " + path.string());
    in.reference_profiles.emplace(b.name, load_reference_profile(path, year));
  }
  const auto household = load_profile(c.household_profile, c.households * c.household_annual_kwh, year);
  const auto service = demand::synthesize_service_profile(in.mix, in.reference_profiles, year);
  in.loads = demand::build_load_cases(household, service);
  in.load_residential_mw = in.loads.residential.series.in(Unit::MW);
  in.load_mixed_mw = in.loads.mixed.series.in(Unit::MW);
  in.pv_unit = gen::pv_unit_series(in.weather, c.pv, year);
  in.wind_unit = gen::wind_unit_series(in.weather, c.turbine, year);
  gen::AreaBudget budget = c.area;
  budget.service_roofs = scaling::roof_areas(in.scaling.buildings);
  in.area = gen::area_budget_totals(in.mix, c.households, budget);
  return in;
}

inline const HourlySeries& load_for(const Inputs& in, demand::LoadKind kind) {
  return kind == demand::LoadKind::mixed ? in.load_mixed_mw : in.load_residential_mw;
}

inline demand::LoadKind parse_load_kind(const std::string& s) {
  if (s == "mixed") return demand::LoadKind::mixed;
  if (s == "residential") return demand::LoadKind::residential_only;
  throw ConfigError("unknown load case '" + s + "' (expected mixed or residential)");
}

inline opt::MixProblem mix_problem(const Inputs& in, const Config& c, demand::LoadKind kind) {
  opt::MixProblem p;
  auto values = [](const HourlySeries& s) { return std::vector<double>(s.values().begin(), s.values().end()); };
  p.g_pv = values(in.pv_unit);
  p.g_turbine = values(in.wind_unit);
  p.load = values(load_for(in, kind));
  p.roof_area_m2 = in.area.roof_m2;
  p.phi_area = c.area.phi_area;
  p.weights = c.optimizer.weights;
  p.turbine_footprint_m2 = gen::turbine_footprint_m2(c.area, c.turbine);
  p.pv_rated_w_m2 = c.pv.rated_power_density_w_m2;
  p.turbine_nominal_kw = c.turbine.nominal_power_kw;
  p.sign = c.optimizer.sign;
  p.roof_only_pv = c.area.roof_only_pv;
  return p;
}

inline std::string optional_cell(std::optional<double> v) { return v ? csv::format(*v) : std::string(); }

inline std::string double_cell(double v) { return std::isfinite(v) ? csv::format(v) : std::string(); }

inline double mean_or_nan(std::span<const double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return stats::moments(v).mean;
}

/// Residential-minus-mixed comparison of one metric.
struct Comparison {
  double annual_diff = std::numeric_limits<double>::quiet_NaN();  // MWh, or ratio for self-consumption
  double mean_diff = std::numeric_limits<double>::quiet_NaN();    // per-hour average
  stats::TestResult test;
};

inline constexpr std::size_t kMetricCount = metrics::kReportedMetrics.size();

/// Per-hour samples of one metric for both load cases, with undefined
/// self-consumption hours removed.
inline std::array<std::vector<double>, 2> metric_samples(const std::vector<metrics::HourMetrics>& residential,
                                                          const std::vector<metrics::HourMetrics>& mixed,
                                                          std::span<const double> generation, metrics::Metric m) {
  auto r = metrics::metric_values(residential, generation, m);
  auto x = metrics::metric_values(mixed, generation, m);
  if (m == metrics::Metric::self_consumption) return {stats::finite_values(r), stats::finite_values(x)};
  return {std::move(r), std::move(x)};
}

// ---------------------------------------------------------------------------
// Experiment 1: capacity sweep

struct Cell {
  double pv_mw = 0.0;
  double wind_mw = 0.0;
  metrics::AggregateMetrics residential;
  metrics::AggregateMetrics mixed;
  std::array<Comparison, kMetricCount> comparisons;
};

struct ScenarioGrid {
  std::vector<double> pv_caps;
  std::vector<double> wind_caps;
  std::vector<Cell> cells;  // pv-major: cells[i * wind_caps.size() + j]

  [[nodiscard]] const Cell& at(std::size_t i, std::size_t j) const { return cells[i * wind_caps.size() + j]; }
};

inline std::vector<double> capacity_axis(double max_mw, double step_mw) {
  if (!(step_mw > 0.0) || !(max_mw >= 0.0)) throw ConfigError("sweep: step must be positive and max non-negative");
  const auto n = static_cast<std::size_t>(std::llround(max_mw / step_mw));
  if (std::abs(static_cast<double>(n) * step_mw - max_mw) > 1e-9 * std::max(1.0, max_mw)) {
    throw ConfigError("sweep: max_mw must be a multiple of step_mw");
  }
  std::vector<double> axis(n + 1);
  for (std::size_t i = 0; i <= n; ++i) axis[i] = static_cast<double>(i) * step_mw;
  return axis;
}

/// Metrics of both load cases for one installed mix. Both cases use the same
/// generation series.
inline Cell evaluate_cell(const Inputs& in, const Config& c, double pv_mw, double wind_mw) {
  Cell cell;
  cell.pv_mw = pv_mw;
  cell.wind_mw = wind_mw;
  const auto g = gen::scenario_generation(pv_mw, wind_mw, in.pv_unit, in.wind_unit, c.pv, c.turbine);
  const auto hr = metrics::hourly_metrics(g, in.load_residential_mw);
  const auto hm = metrics::hourly_metrics(g, in.load_mixed_mw);
  cell.residential = metrics::aggregate(hr, g);
  cell.mixed = metrics::aggregate(hm, g);
  for (std::size_t k = 0; k < kMetricCount; ++k) {
    const auto m = metrics::kReportedMetrics[k];
    auto& cmp = cell.comparisons[k];
    const auto ar = metrics::annual_value(cell.residential, m);
    const auto am = metrics::annual_value(cell.mixed, m);
    if (ar && am) cmp.annual_diff = *ar - *am;
    const auto samples = metric_samples(hr, hm, g.values(), m);
    cmp.mean_diff = mean_or_nan(samples[0]) - mean_or_nan(samples[1]);
    cmp.test = stats::two_sample_t_test(samples[0], samples[1], c.sweep.variance);
  }
  return cell;
}

inline ScenarioGrid run_experiment1(const Inputs& in, const Config& c) {
  ScenarioGrid grid;
  grid.pv_caps = capacity_axis(c.sweep.max_mw, c.sweep.step_mw);
  grid.wind_caps = grid.pv_caps;
  const std::size_t nw = grid.wind_caps.size();
  grid.cells.resize(grid.pv_caps.size() * nw);
  parallel_for(grid.cells.size(), c.workers, [&](std::size_t idx) {
    const double pv = grid.pv_caps[idx / nw];
    const double wind = grid.wind_caps[idx % nw];
    try {
      grid.cells[idx] = evaluate_cell(in, c, pv, wind);
    } catch (const Error& e) {
      throw Error("scenario pv=" + csv::format(pv) + " MW wind=" + csv::format(wind) + " MW: " + e.what());
    }
  });
  for (std::size_t k = 0; k < kMetricCount; ++k) {
    std::vector<stats::TestResult> family;
    family.reserve(grid.cells.size());
    for (const auto& cell : grid.cells) family.push_back(cell.comparisons[k].test);
    stats::apply_holm(family, c.sweep.alpha);
    for (std::size_t i = 0; i < grid.cells.size(); ++i) grid.cells[i].comparisons[k].test = family[i];
  }
  return grid;
}

inline std::vector<std::string> test_cells(const stats::TestResult& t) {
  if (!t.testable) return {"", "", "1", "false"};
  return {csv::format(t.t_stat), csv::format(t.dof), csv::format(t.p_value), t.reject ? "true" : "false"};
}

inline void write_experiment1(const ScenarioGrid& grid, const std::filesystem::path& dir) {
  csv::Writer m(dir / "sweep_metrics.csv",
                {"scenario_pv_mw", "scenario_wind_mw", "load_case", "pos_mwh", "neg_mwh", "util_mwh", "self_consumption"});
  for (const auto& cell : grid.cells) {
    for (const auto kind : {demand::LoadKind::residential_only, demand::LoadKind::mixed}) {
      const auto& a = kind == demand::LoadKind::mixed ? cell.mixed : cell.residential;
      m.row({csv::format(cell.pv_mw), csv::format(cell.wind_mw), std::string(demand::to_string(kind)),
             csv::format(a.pos_mismatch), csv::format(a.neg_mismatch), csv::format(a.utilisation),
             optional_cell(a.self_consumption)});
    }
  }
  csv::Writer d(dir / "sweep_differences.csv", {"scenario_pv_mw", "scenario_wind_mw", "metric", "annual_diff",
                                                "hourly_mean_diff", "t", "dof", "p", "reject_holm"});
  for (const auto& cell : grid.cells) {
    for (std::size_t k = 0; k < kMetricCount; ++k) {
      const auto& cmp = cell.comparisons[k];
      std::vector<std::string> row = {csv::format(cell.pv_mw), csv::format(cell.wind_mw),
                                      std::string(metrics::to_string(metrics::kReportedMetrics[k])),
                                      double_cell(cmp.annual_diff), double_cell(cmp.mean_diff)};
      for (auto& s : test_cells(cmp.test)) row.push_back(std::move(s));
      d.row(row);
    }
  }
}

// ---------------------------------------------------------------------------
// Experiment 2: time and weather categories

struct CategoryComparison {
  std::size_t hours = 0;
  double mean_residential = std::numeric_limits<double>::quiet_NaN();
  double mean_mixed = std::numeric_limits<double>::quiet_NaN();
  stats::TestResult test;
};

struct CategoryTables {
  double pv_mw = 0.0;
  double wind_mw = 0.0;
  classify::BinEdges edges;
  std::vector<classify::CategoryKey> keys;
  classify::CountMatrix counts{};
  // [metric][load case: 0 residential, 1 mixed]
  std::array<std::array<std::array<classify::CategoryStats, classify::kCategoryCount>, 2>, kMetricCount> stats{};
  std::array<std::array<CategoryComparison, classify::kCategoryCount>, kMetricCount> comparisons{};
};

/// Solar and wind output in percent of installed capacity.
inline std::array<std::vector<double>, 2> capacity_percentages(const Inputs& in, const Config& c) {
  std::vector<double> solar(in.pv_unit.size()), wind(in.wind_unit.size());
  for (std::size_t h = 0; h < solar.size(); ++h) {
    solar[h] = std::min(100.0, 100.0 * in.pv_unit[h] / c.pv.rated_power_density_w_m2);
    wind[h] = std::min(100.0, 100.0 * in.wind_unit[h] / c.turbine.nominal_power_kw);
  }
  return {std::move(solar), std::move(wind)};
}

inline CategoryTables run_experiment2(const Inputs& in, const Config& c, double pv_mw, double wind_mw) {
  CategoryTables t;
  t.pv_mw = pv_mw;
  t.wind_mw = wind_mw;
  const auto pct = capacity_percentages(in, c);
  t.edges = classify::compute_bins(pct[0], pct[1], classify::daylight_mask(pct[0]));
  t.keys = classify::classify_year(in.calendar, pct[0], pct[1], t.edges);
  t.counts = classify::count_matrix(t.keys);
  const auto members = classify::category_members(t.keys);

  const auto g = gen::scenario_generation(pv_mw, wind_mw, in.pv_unit, in.wind_unit, c.pv, c.turbine);
  const auto hr = metrics::hourly_metrics(g, in.load_residential_mw);
  const auto hm = metrics::hourly_metrics(g, in.load_mixed_mw);
  for (std::size_t k = 0; k < kMetricCount; ++k) {
    const auto m = metrics::kReportedMetrics[k];
    const auto vr = metrics::metric_values(hr, g.values(), m);
    const auto vm = metrics::metric_values(hm, g.values(), m);
    t.stats[k][0] = classify::aggregate_by_category(t.keys, vr);
    t.stats[k][1] = classify::aggregate_by_category(t.keys, vm);
    std::vector<stats::TestResult> family(classify::kCategoryCount);
    parallel_for(classify::kCategoryCount, c.workers, [&](std::size_t cat) {
      std::vector<double> a, b;
      for (std::size_t h : members[cat]) {
        if (std::isfinite(vr[h])) a.push_back(vr[h]);
        if (std::isfinite(vm[h])) b.push_back(vm[h]);
      }
      family[cat] = stats::two_sample_t_test(a, b, c.sweep.variance);
    });
    stats::apply_holm(family, c.sweep.alpha);
    for (std::size_t cat = 0; cat < classify::kCategoryCount; ++cat) {
      auto& cc = t.comparisons[k][cat];
      cc.hours = members[cat].size();
      cc.mean_residential = t.stats[k][0][cat].mean();
      cc.mean_mixed = t.stats[k][1][cat].mean();
      cc.test = family[cat];
    }
  }
  return t;
}

/// Sums of a metric over all categories with the given day kind and time
/// band, per load case.
inline std::array<double, 2> band_sum(const CategoryTables& t, metrics::Metric m, DayKind day, classify::TimeBand band) {
  std::size_t k = 0;
  while (metrics::kReportedMetrics[k] != m) ++k;
  std::array<double, 2> out{};
  for (std::size_t cat = 0; cat < classify::kCategoryCount; ++cat) {
    const auto key = classify::CategoryKey::from_index(cat);
    if (key.day_kind != day || key.time_band != band) continue;
    out[0] += t.stats[k][0][cat].sum;
    out[1] += t.stats[k][1][cat].sum;
  }
  return out;
}

/// Signs of the load-case differences reported for the paper's Experiment 2.
struct DirectionalChecks {
  std::array<double, 2> weekday_day_utilisation{};   // residential, mixed (MWh)
  std::array<double, 2> weekday_evening_neg_abs{};   // residential, mixed (MWh)
  [[nodiscard]] bool mixed_uses_more_by_day() const { return weekday_day_utilisation[1] >= weekday_day_utilisation[0]; }
  [[nodiscard]] bool residential_smaller_evening_shortage() const {
    return weekday_evening_neg_abs[0] < weekday_evening_neg_abs[1];
  }
};

inline DirectionalChecks directional_checks(const CategoryTables& t) {
  DirectionalChecks d;
  d.weekday_day_utilisation = band_sum(t, metrics::Metric::utilisation, DayKind::weekday, classify::TimeBand::day);
  const auto neg = band_sum(t, metrics::Metric::neg_mismatch, DayKind::weekday, classify::TimeBand::evening);
  d.weekday_evening_neg_abs = {std::abs(neg[0]), std::abs(neg[1])};
  return d;
}

inline std::vector<std::string> key_cells(const classify::CategoryKey& k) {
  return {std::string(to_string(k.day_kind)), std::string(classify::to_string(k.time_band)), std::to_string(k.solar_bin),
          std::to_string(k.wind_bin)};
}

inline void write_experiment2(const CategoryTables& t, const std::filesystem::path& dir) {
  {
    csv::Writer w(dir / "bin_edges.csv", {"resource", "edge_1", "edge_2", "edge_3", "edge_4"});
    for (const auto& [name, edges] : {std::pair{"solar", t.edges.solar}, std::pair{"wind", t.edges.wind}}) {
      w.row({name, csv::format(edges[0]), csv::format(edges[1]), csv::format(edges[2]), csv::format(edges[3])});
    }
  }
  {
    csv::Writer w(dir / "category_counts.csv",
                  {"time_band", "solar_bin", "wind_1", "wind_2", "wind_3", "wind_4", "wind_5", "total"});
    std::array<std::size_t, classify::kBins + 1> column{};
    for (std::size_t b = 0; b < classify::kTimeBands; ++b) {
      for (std::size_t s = 0; s < classify::kBins; ++s) {
        std::vector<std::string> row = {std::string(classify::to_string(static_cast<classify::TimeBand>(b))),
                                        std::to_string(s + 1)};
        std::size_t total = 0;
        for (std::size_t wb = 0; wb < classify::kBins; ++wb) {
          row.push_back(std::to_string(t.counts[b][s][wb]));
          total += t.counts[b][s][wb];
          column[wb] += t.counts[b][s][wb];
        }
        column[classify::kBins] += total;
        row.push_back(std::to_string(total));
        w.row(row);
      }
    }
    std::vector<std::string> row = {"total", ""};
    for (auto n : column) row.push_back(std::to_string(n));
    w.row(row);
  }
  for (std::size_t k = 0; k < kMetricCount; ++k) {
    const std::string metric(metrics::to_string(metrics::kReportedMetrics[k]));
    for (std::size_t lc = 0; lc < 2; ++lc) {
      const std::string load = lc ? "mixed" : "residential";
      csv::Writer w(dir / ("categories_" + load + "_" + metric + ".csv"),
                    {"day_kind", "time_band", "solar_bin", "wind_bin", "hours", "metric", "mean", "sum"});
      for (std::size_t cat = 0; cat < classify::kCategoryCount; ++cat) {
        const auto& s = t.stats[k][lc][cat];
        auto row = key_cells(classify::CategoryKey::from_index(cat));
        row.push_back(std::to_string(s.hours));
        row.push_back(metric);
        row.push_back(double_cell(s.mean()));
        row.push_back(s.defined ? csv::format(s.sum) : std::string());
        w.row(row);
      }
    }
    csv::Writer w(dir / ("category_differences_" + metric + ".csv"),
                  {"day_kind", "time_band", "solar_bin", "wind_bin", "hours", "mean_residential", "mean_mixed", "t",
                   "dof", "p", "reject_holm"});
    for (std::size_t cat = 0; cat < classify::kCategoryCount; ++cat) {
      const auto& cc = t.comparisons[k][cat];
      auto row = key_cells(classify::CategoryKey::from_index(cat));
      row.push_back(std::to_string(cc.hours));
      row.push_back(double_cell(cc.mean_residential));
      row.push_back(double_cell(cc.mean_mixed));
      for (auto& s : test_cells(cc.test)) row.push_back(std::move(s));
      w.row(row);
    }
  }
  const auto d = directional_checks(t);
  csv::Writer w(dir / "directional_checks.csv", {"check", "residential", "mixed", "holds"});
  w.row({"weekday_day_utilisation_mwh", csv::format(d.weekday_day_utilisation[0]),
         csv::format(d.weekday_day_utilisation[1]), d.mixed_uses_more_by_day() ? "true" : "false"});
  w.row({"weekday_evening_neg_mismatch_abs_mwh", csv::format(d.weekday_evening_neg_abs[0]),
         csv::format(d.weekday_evening_neg_abs[1]), d.residential_smaller_evening_shortage() ? "true" : "false"});
}

}  // namespace urbanmix::exp
