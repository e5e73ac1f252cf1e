#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "urbanmix/series.hpp"

using namespace urbanmix;

TEST(Series, LeapYears) {
  EXPECT_EQ(hours_in_year(2014), 8760u);
  EXPECT_EQ(hours_in_year(2016), 8784u);
  EXPECT_EQ(hours_in_year(1900), 8760u);
  EXPECT_EQ(hours_in_year(2000), 8784u);
}

TEST(Series, RejectsWrongLength) {
  EXPECT_THROW(HourlySeries(std::vector<double>(8759, 1.0), Unit::kW, 2014), ValidationError);
  EXPECT_THROW(HourlySeries(std::vector<double>(8760, 1.0), Unit::kW, 2016), ValidationError);
}

TEST(Series, RejectsNonFinite) {
  std::vector<double> v(8760, 1.0);
  v[100] = std::numeric_limits<double>::quiet_NaN();
  try {
    HourlySeries(v, Unit::kW, 2014);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("hour 100"), std::string::npos);
  }
  v[100] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(HourlySeries(v, Unit::kW, 2014), ValidationError);
}

TEST(Series, UnitConversion) {
  const auto s = HourlySeries::constant(1500.0, Unit::kW, 2014);
  const auto mw = s.in(Unit::MW);
  EXPECT_EQ(mw.unit(), Unit::MW);
  EXPECT_DOUBLE_EQ(mw[0], 1.5);
  EXPECT_DOUBLE_EQ(mw.in(Unit::kW)[5], 1500.0);
  EXPECT_THROW(s.in(Unit::W_per_m2), ValidationError);
}

TEST(Series, Arithmetic) {
  const auto a = HourlySeries::constant(2.0, Unit::kW, 2014);
  const auto b = HourlySeries::constant(0.5, Unit::kW, 2014);
  EXPECT_DOUBLE_EQ((a + b).sum(), 2.5 * 8760);
  EXPECT_DOUBLE_EQ((a - b)[42], 1.5);
  EXPECT_DOUBLE_EQ(a.scaled(3.0).max(), 6.0);
  EXPECT_THROW(a + HourlySeries::constant(1.0, Unit::MW, 2014), ValidationError);
  EXPECT_THROW(a + HourlySeries::constant(1.0, Unit::kW, 2016), ValidationError);
}
