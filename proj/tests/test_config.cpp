#include <gtest/gtest.h>

#include <fstream>

#include "fixture.hpp"
#include "urbanmix/config.hpp"

using namespace urbanmix;

namespace {

nlohmann::json minimal() {
  return {{"calendar", "calendar.json"},       {"weather", "weather.csv"},
          {"household_profile", "household.csv"}, {"reference_profiles_dir", "profiles"},
          {"scaling_spec", "/abs/scaling.json"}};
}

}  // namespace

TEST(Config, DefaultsAndPathResolution) {
  const auto c = config_from_json(minimal(), "/base");
  EXPECT_EQ(c.calendar, std::filesystem::path("/base/calendar.json"));
  EXPECT_EQ(c.scaling_spec, std::filesystem::path("/abs/scaling.json"));
  EXPECT_EQ(c.households, 100000.0);
  EXPECT_EQ(c.turbine.rotor_area_m2, 2290.0);
  EXPECT_EQ(c.area.phi_area, 3.0);
  EXPECT_EQ(c.sweep.max_mw, 525.0);
  EXPECT_EQ(c.sweep.step_mw, 52.5);
  EXPECT_EQ(c.experiment2.pv_mw, 399.0);
  EXPECT_EQ(c.experiment2.wind_mw, 30.0);
  EXPECT_EQ(c.optimizer.sign, opt::SignConvention::magnitude_neg);
  EXPECT_EQ(c.optimizer.weights.ren, -5.0);
  EXPECT_EQ(c.national.households_total, 7.59e6);
  EXPECT_FALSE(c.national.real_inputs);
}

TEST(Config, Overrides) {
  auto j = minimal();
  j["households"] = 50000;
  j["turbine"] = {{"cp", 0.4}};
  j["pv"] = {{"model", "single-diode"}};
  j["area"] = {{"roof_only_pv", true}};
  j["sweep"] = {{"t_test", "pooled"}, {"max_mw", 105}};
  j["optimizer"] = {{"sign", "signed-neg"}, {"weights", {{"ren", -2}}}, {"ga", {{"population", 30}}}};
  const auto c = config_from_json(j, "/b");
  EXPECT_EQ(c.households, 50000.0);
  EXPECT_EQ(c.turbine.cp, 0.4);
  EXPECT_EQ(c.pv.model, gen::PvModel::single_diode);
  EXPECT_TRUE(c.area.roof_only_pv);
  EXPECT_EQ(c.sweep.variance, stats::Variance::pooled);
  EXPECT_EQ(c.sweep.max_mw, 105.0);
  EXPECT_EQ(c.optimizer.sign, opt::SignConvention::signed_neg);
  EXPECT_EQ(c.optimizer.weights.ren, -2.0);
  EXPECT_EQ(c.optimizer.weights.pos, 1.0);
  EXPECT_EQ(c.optimizer.ga.population, 30u);
}

TEST(Config, Errors) {
  auto j = minimal();
  j.erase("weather");
  EXPECT_THROW(config_from_json(j, "/b"), ConfigError);
  for (const auto& [key, value] : std::vector<std::pair<std::string, nlohmann::json>>{
           {"pv", {{"model", "walker"}}},
           {"sweep", {{"t_test", "mann-whitney"}}},
           {"optimizer", {{"sign", "abs"}}},
           {"households", 0},
           {"turbine", {{"cp", 0.7}}},
           {"sweep", {{"max_mw", "lots"}}}}) {
    auto bad = minimal();
    bad[key] = value;
    EXPECT_ANY_THROW(config_from_json(bad, "/b")) << key;
  }
}

TEST(Config, LoadFromFile) {
  const auto dir = testing_support::tmp_dir("config");
  {
    std::ofstream(dir / "c.json") << minimal().dump();
    std::ofstream(dir / "broken.json") << "{ not json";
  }
  EXPECT_EQ(load_config(dir / "c.json").weather, dir / "weather.csv");
  EXPECT_THROW(load_config(dir / "broken.json"), ConfigError);
  EXPECT_THROW(load_config(dir / "missing.json"), IoError);
}

TEST(Config, FixtureConfigLoads) {
  const auto c = load_config(testing_support::shared_fixture());
  EXPECT_TRUE(std::filesystem::exists(c.weather));
  EXPECT_TRUE(std::filesystem::is_directory(c.reference_profiles_dir));
}
