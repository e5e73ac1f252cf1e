#include <gtest/gtest.h>

#include <sstream>

#include "fixture.hpp"
#include "urbanmix/validation.hpp"

using namespace urbanmix;
using namespace urbanmix::validation;

namespace {

scaling::ScalingSpecFile shipped() {
  return scaling::load_scaling_spec(std::string(URBANMIX_DATA_DIR) + "/nl2014/scaling.json");
}

}  // namespace

TEST(Validation, FlagsExactlyTheKnownInconsistencies) {
  const auto r = reconcile_appendix(shipped());
  ASSERT_EQ(r.buildings.size(), 13u);
  ASSERT_EQ(r.office_bands.size(), 5u);
  const auto bad = r.inconsistencies();
  ASSERT_EQ(bad.size(), 4u);
  EXPECT_EQ(bad[0], "Medium Office");
  EXPECT_EQ(bad[1], "Quick Service Restaurant");
  EXPECT_EQ(bad[2], "Warehouse");
  EXPECT_NE(bad[3].find("10000"), std::string::npos);
  for (const auto& b : r.buildings) {
    if (b.verdict == kMatch) {
      EXPECT_EQ(b.count_printed_path, b.count_recomputed_path) << b.name;
      EXPECT_TRUE(b.note.empty());
    } else {
      EXPECT_FALSE(b.note.empty());
    }
  }
}

TEST(Validation, ReconciliationWriters) {
  const auto r = reconcile_appendix(shipped());
  const auto dir = testing_support::tmp_dir("validation");
  write_reconciliation_csv(r, dir / "r.csv");
  const auto csv = testing_support::slurp(dir / "r.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 13 + 5);
  EXPECT_NE(csv.find("paper-internal inconsistency"), std::string::npos);
  std::ostringstream text;
  write_reconciliation_text(r, text);
  EXPECT_NE(text.str().find("Warehouse"), std::string::npos);
}

TEST(Validation, ConsistentSpecHasNoFindings) {
  auto spec = shipped();
  for (auto& b : spec.buildings) {
    b.printed = {};
    b.expected_count.reset();
  }
  for (auto& band : spec.context.office_bands) band.printed_count.reset();
  for (auto& band : spec.context.office_bands) band.printed_area_m2.reset();
  for (auto& b : spec.buildings) b.breakdown.clear();
  // Without printed intermediates only the office-band path could differ; drop office types.
  std::erase_if(spec.buildings, [](const auto& b) { return b.method == scaling::Method::office_bands; });
  for (auto& b : spec.buildings) {
    if (b.method == scaling::Method::direct_count && !b.inputs.count("count")) b.inputs["count"] = {100, "buildings"};
  }
  EXPECT_TRUE(reconcile_appendix(spec).inconsistencies().empty());
}

TEST(Validation, NationalTotal) {
  const auto s = HourlySeries::constant(1000.0, Unit::kW, 2014);
  const auto c = national_total_check(s, 100000, 7.59e6, {{"PBL", 33.6}}, 26.9, false);
  EXPECT_TRUE(c.skipped);
  EXPECT_EQ(c.status, "fixture-only, check skipped");
  EXPECT_NEAR(c.modeled_twh, 8760e3 * 75.9 * 1e-9, 1e-12);
  EXPECT_NEAR(c.ratios.at("PBL"), c.modeled_twh / 33.6, 1e-15);
  const auto real = national_total_check(s, 100000, 7.59e6, {}, 26.9, true);
  EXPECT_FALSE(real.skipped);
  EXPECT_THROW(national_total_check(s, 0, 7.59e6, {}, 26.9, false), ValidationError);
  EXPECT_THROW(national_total_check(s, 1, 7.59e6, {{"x", 0}}, 26.9, false), ValidationError);
}
