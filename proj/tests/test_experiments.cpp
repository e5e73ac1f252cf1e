#include <gtest/gtest.h>

#include <cmath>

#include "fixture.hpp"
#include "urbanmix/experiments.hpp"

using namespace urbanmix;
using namespace urbanmix::exp;

namespace {

struct Loaded {
  Config config;
  Inputs inputs;
};

const Loaded& loaded() {
  static const Loaded l = [] {
    auto c = load_config(testing_support::shared_fixture());
    auto in = load_inputs(c);
    return Loaded{std::move(c), std::move(in)};
  }();
  return l;
}

const ScenarioGrid& grid() {
  static const ScenarioGrid g = run_experiment1(loaded().inputs, loaded().config);
  return g;
}

}  // namespace

TEST(Experiments, CapacityAxis) {
  const auto axis = capacity_axis(525, 52.5);
  ASSERT_EQ(axis.size(), 11u);
  EXPECT_EQ(axis.front(), 0.0);
  EXPECT_DOUBLE_EQ(axis[3], 157.5);
  EXPECT_DOUBLE_EQ(axis.back(), 525.0);
  EXPECT_THROW(capacity_axis(100, 30), ConfigError);
  EXPECT_THROW(capacity_axis(100, 0), ConfigError);
}

TEST(Experiments, InputsAreConsistent) {
  const auto& in = loaded().inputs;
  EXPECT_EQ(in.mix.count("Warehouse"), 163);
  EXPECT_EQ(in.mix.count("Quick Service Restaurant"), 189);
  EXPECT_NEAR(in.load_residential_mw.sum(), in.load_mixed_mw.sum(), 1e-9 * in.load_mixed_mw.sum());
  EXPECT_GT(in.loads.phi, 1.0);
  EXPECT_GT(in.area.roof_m2, 3.3e6);
}

TEST(Experiments, SweepShape) {
  const auto& g = grid();
  EXPECT_EQ(g.cells.size(), 121u);
  EXPECT_DOUBLE_EQ(g.at(3, 7).pv_mw, 157.5);
  EXPECT_DOUBLE_EQ(g.at(3, 7).wind_mw, 367.5);
}

TEST(Experiments, ZeroCell) {
  const auto& c = grid().at(0, 0);
  const auto& in = loaded().inputs;
  EXPECT_EQ(c.residential.pos_mismatch, 0.0);
  EXPECT_EQ(c.mixed.pos_mismatch, 0.0);
  EXPECT_EQ(c.residential.utilisation, 0.0);
  EXPECT_FALSE(c.residential.self_consumption.has_value());
  EXPECT_NEAR(c.residential.neg_mismatch, -in.load_residential_mw.sum(), 1e-9 * in.load_residential_mw.sum());
  EXPECT_NEAR(c.comparisons[1].annual_diff, 0.0, 1e-9 * in.load_mixed_mw.sum());
  EXPECT_TRUE(std::isnan(c.comparisons[3].annual_diff));
}

TEST(Experiments, CellMatchesDirectComputation) {
  const auto& l = loaded();
  const auto& c = grid().at(4, 2);
  const auto g = gen::scenario_generation(210, 105, l.inputs.pv_unit, l.inputs.wind_unit, l.config.pv, l.config.turbine);
  const auto direct = metrics::evaluate(g, l.inputs.load_mixed_mw);
  EXPECT_DOUBLE_EQ(c.mixed.pos_mismatch, direct.pos_mismatch);
  EXPECT_DOUBLE_EQ(c.mixed.utilisation, direct.utilisation);
  EXPECT_NEAR(c.comparisons[2].annual_diff,
              metrics::delta_utilisation(g, l.inputs.load_residential_mw, l.inputs.load_mixed_mw), 1e-6);
}

TEST(Experiments, ParallelEqualsSerial) {
  auto c = loaded().config;
  c.workers = 4;
  const auto par = run_experiment1(loaded().inputs, c);
  const auto& ser = grid();
  for (std::size_t i = 0; i < ser.cells.size(); ++i) {
    ASSERT_EQ(par.cells[i].mixed.pos_mismatch, ser.cells[i].mixed.pos_mismatch);
    for (std::size_t k = 0; k < kMetricCount; ++k) {
      ASSERT_EQ(par.cells[i].comparisons[k].test.p_value, ser.cells[i].comparisons[k].test.p_value);
      ASSERT_EQ(par.cells[i].comparisons[k].test.reject, ser.cells[i].comparisons[k].test.reject);
    }
  }
}

TEST(Experiments, CategoryTables) {
  const auto& l = loaded();
  const auto t = run_experiment2(l.inputs, l.config, 399, 30);
  std::size_t total = 0;
  std::array<std::size_t, 5> wind{};
  for (const auto& band : t.counts)
    for (const auto& row : band)
      for (std::size_t w = 0; w < 5; ++w) {
        total += row[w];
        wind[w] += row[w];
      }
  EXPECT_EQ(total, 8760u);
  for (auto n : wind) EXPECT_EQ(n, 1752u);
  std::size_t members = 0;
  for (const auto& cc : t.comparisons[0]) members += cc.hours;
  EXPECT_EQ(members, 8760u);
  // Night hours fall in solar bin 1 exactly when PV output is zero.
  std::size_t night_sun = 0, night_high = 0;
  for (std::size_t h = 0; h < t.keys.size(); ++h) {
    if (t.keys[h].time_band != classify::TimeBand::night) continue;
    night_sun += l.inputs.pv_unit[h] > 0.0 && 100.0 * l.inputs.pv_unit[h] / l.config.pv.rated_power_density_w_m2 >= t.edges.solar[0];
    night_high += t.keys[h].solar_bin > 1;
  }
  EXPECT_EQ(night_high, night_sun);
  for (const auto& k : classify::all_keys()) {
    const auto& cc = t.comparisons[0][k.index()];
    if (cc.hours < 2) {
      EXPECT_FALSE(cc.test.testable);
    }
    if (cc.hours == 0) {
      EXPECT_TRUE(std::isnan(cc.mean_residential));
    }
  }
  const auto again = run_experiment2(l.inputs, l.config, 399, 30);
  EXPECT_EQ(again.edges.solar, t.edges.solar);
  EXPECT_EQ(again.comparisons[2][40].test.p_value, t.comparisons[2][40].test.p_value);
}

TEST(Experiments, DirectionalChecksOnFixture) {
  const auto& l = loaded();
  const auto d = directional_checks(run_experiment2(l.inputs, l.config, 399, 30));
  EXPECT_TRUE(d.mixed_uses_more_by_day());
  EXPECT_TRUE(d.residential_smaller_evening_shortage());
}

TEST(Experiments, WritesFiles) {
  const auto dir = testing_support::tmp_dir("experiments");
  write_experiment1(grid(), dir);
  const auto m = testing_support::slurp(dir / "sweep_metrics.csv");
  EXPECT_EQ(m.substr(0, m.find('\n')), "scenario_pv_mw,scenario_wind_mw,load_case,pos_mwh,neg_mwh,util_mwh,self_consumption");
  EXPECT_EQ(std::count(m.begin(), m.end(), '\n'), 243);
  const auto& l = loaded();
  write_experiment2(run_experiment2(l.inputs, l.config, 399, 30), dir);
  for (const char* f : {"bin_edges.csv", "category_counts.csv", "categories_mixed_utilisation.csv",
                        "category_differences_pos_mismatch.csv", "directional_checks.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
}
