#include <gtest/gtest.h>

#include "urbanmix/sector_scaling.hpp"

using namespace urbanmix;
using namespace urbanmix::scaling;

namespace {

ScalingSpecFile shipped() { return load_scaling_spec(std::string(URBANMIX_DATA_DIR) + "/nl2014/scaling.json"); }

const BuildingScalingSpec& find(const ScalingSpecFile& f, const std::string& name) {
  for (const auto& b : f.buildings) {
    if (b.name == name) return b;
  }
  throw std::runtime_error("no " + name);
}

}  // namespace

TEST(Scaling, CountRatio) {
  EXPECT_EQ(round_half_away(count_ratio_equivalents(134, 316, 161)), 263);
  EXPECT_EQ(round_half_away(count_ratio_equivalents(7155, 219, 650)), 2411);
  EXPECT_DOUBLE_EQ(count_ratio_equivalents(42, 17.5, 17.5), 42);
  EXPECT_THROW(count_ratio_equivalents(1, 1, 0), ValidationError);
}

TEST(Scaling, AreaEquivalents) {
  EXPECT_EQ(round_half_away(area_equivalents(30775168, 2294)), 13416);
  EXPECT_EQ(round_half_away(area_equivalents(3781699, 4181)), 904);
  EXPECT_EQ(area_equivalents(0, 123), 0);
  EXPECT_THROW(area_equivalents(1, -1), ValidationError);
}

TEST(Scaling, OfficeBandsFromTableInputs) {
  const auto f = shipped();
  const auto counts = office_band_counts(f.context.office_bands, f.context.office_total_used_area_m2);
  ASSERT_EQ(counts.size(), 5u);
  const double expected[] = {326, 1238, 1498, 1368, 2084};
  double area = 0.0;
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_EQ(round_half_away(counts[j].count), expected[j]) << "band " << j;
    area += counts[j].area_m2;
  }
  EXPECT_NEAR(area, 49.55e6, 49.55e6 * 1e-3);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(round_half_away(counts[j].count), *f.context.office_bands[j].printed_count);
}

TEST(Scaling, OfficeBandEdgeCases) {
  OfficeBand single{500, 1500, 100, std::nullopt, std::nullopt, std::nullopt};
  const auto c = office_band_counts({single}, 10000);
  EXPECT_DOUBLE_EQ(c[0].count, 10);
  OfficeBand a{0, 100, 60, std::nullopt, std::nullopt, std::nullopt};
  OfficeBand b{100, 200, 39, std::nullopt, std::nullopt, std::nullopt};
  EXPECT_THROW(office_band_counts({a, b}, 1000), ValidationError);
  OfficeBand open{100, std::nullopt, 100, std::nullopt, std::nullopt, std::nullopt};
  EXPECT_THROW(office_band_counts({open}, 1000), ValidationError);
}

TEST(Scaling, Warehouse) {
  EXPECT_NEAR(warehouse_equivalents(12e6, 239, 82600, 334100), 12413.3, 0.1);
  EXPECT_DOUBLE_EQ(warehouse_equivalents(239, 239, 5, 5), 1);
  EXPECT_DOUBLE_EQ(warehouse_equivalents(100, 10, 4, 2), 2 * warehouse_equivalents(100, 10, 2, 2));
  EXPECT_THROW(warehouse_equivalents(100, 0, 1, 1), ValidationError);
}

TEST(Scaling, PerHundredThousand) {
  EXPECT_EQ(per_100k(263), 3);
  EXPECT_EQ(per_100k(14372), 189);
  EXPECT_EQ(per_100k(12397), 163);
  EXPECT_EQ(per_100k(12413), 164);
  EXPECT_EQ(per_100k(75.9 * 2.5), 3);  // half away from zero
  EXPECT_THROW(per_100k(-1), ValidationError);
}

TEST(Scaling, ShippedFixtureReproducesPublishedMix) {
  const auto f = shipped();
  const auto mix = build_service_mix(f.buildings, f.context);
  const std::vector<long> expected = {3, 1, 16, 9, 47, 6, 32, 9, 177, 12, 170, 189, 163};
  ASSERT_EQ(mix.entries.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(mix.entries[i].count, expected[i]) << mix.entries[i].building_type;
  for (const auto& b : f.buildings) EXPECT_EQ(mix.count(b.name), *b.expected_count);
}

TEST(Scaling, RecomputedPathDiffersOnlyWhereDocumented) {
  const auto f = shipped();
  const auto printed = build_service_mix(f.buildings, f.context, Path::printed);
  const auto recomputed = build_service_mix(f.buildings, f.context, Path::recomputed);
  std::vector<std::string> differ;
  for (std::size_t i = 0; i < printed.entries.size(); ++i) {
    if (printed.entries[i].count != recomputed.entries[i].count) differ.push_back(printed.entries[i].building_type);
  }
  EXPECT_EQ(differ, (std::vector<std::string>{"Medium Office", "Quick Service Restaurant", "Warehouse"}));
  EXPECT_EQ(recomputed.count("Medium Office"), 48);
  EXPECT_NEAR(national_equivalents(find(f, "Medium Office"), f.context), 3621, 1);
}

TEST(Scaling, RestaurantsAndHotels) {
  const auto f = shipped();
  EXPECT_EQ(national_equivalents(find(f, "Restaurant"), f.context), 12903);
  EXPECT_EQ(round_half_away(national_equivalents(find(f, "Large Hotel"), f.context)), 69);
  EXPECT_EQ(round_half_away(national_equivalents(find(f, "Small Hotel"), f.context)), 1193);
  EXPECT_EQ(per_100k(69), 1);
  EXPECT_EQ(per_100k(1193), 16);
}

TEST(Scaling, Homogeneity) {
  BuildingScalingSpec s;
  s.name = "x";
  s.method = Method::count_ratio;
  s.inputs = {{"local_count", {134, "buildings"}}, {"local_quantity", {316, "beds"}}, {"reference_quantity", {161, "beds"}}};
  const ScalingContext ctx;
  const double base = national_equivalents(s, ctx);
  s.inputs["local_count"].value *= 3;
  EXPECT_NEAR(national_equivalents(s, ctx), 3 * base, 1e-9);
  s.inputs["local_quantity"].value = 161;
  EXPECT_DOUBLE_EQ(national_equivalents(s, ctx), 3 * 134);
}

TEST(Scaling, MissingInputNamesTheField) {
  BuildingScalingSpec s;
  s.name = "Hospital";
  s.method = Method::count_ratio;
  s.inputs = {{"local_count", {134, "buildings"}}, {"local_quantity", {316, "beds"}}};
  try {
    national_equivalents(s, ScalingContext{});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("reference_quantity"), std::string::npos);
  }
}

TEST(Scaling, UnitMismatchIsRejected) {
  BuildingScalingSpec s;
  s.name = "Hospital";
  s.method = Method::count_ratio;
  s.inputs = {{"local_count", {134, "buildings"}}, {"local_quantity", {316, "beds"}}, {"reference_quantity", {161, "m2"}}};
  EXPECT_THROW(national_equivalents(s, ScalingContext{}), ConfigError);
}

TEST(Scaling, UnknownMethod) {
  EXPECT_THROW(parse_method("per-employee"), ConfigError);
  EXPECT_EQ(parse_method("office-bands"), Method::office_bands);
  nlohmann::json j = {{"buildings", {{{"name", "x"}, {"method", "magic"}, {"inputs", nlohmann::json::object()},
                                      {"roof_area_m2", 1}}}}};
  EXPECT_THROW(scaling_spec_from_json(j), ConfigError);
}

TEST(Scaling, RoofAreasMatchTable) {
  const auto roofs = roof_areas(shipped().buildings);
  EXPECT_EQ(roofs.size(), 13u);
  for (const auto& [name, area] : roofs) EXPECT_GT(area, 0) << name;
}

TEST(Scaling, CustomHouseholdDivisor) {
  auto f = shipped();
  f.context.households_divisor = 7.59e6 / 50000.0;
  const auto mix = build_service_mix(f.buildings, f.context);
  EXPECT_EQ(mix.count("Restaurant"), per_100k(12903, 151.8));
  EXPECT_EQ(mix.count("Restaurant"), 85);
}
