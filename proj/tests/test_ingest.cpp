#include <gtest/gtest.h>

#include <fstream>

#include "fixture.hpp"
#include "urbanmix/ingest.hpp"

using namespace urbanmix;
using testing_support::tmp_dir;

namespace {

std::vector<WeatherRecord> sample_weather() {
  std::vector<WeatherRecord> w(8760);
  for (std::size_t h = 0; h < w.size(); ++h) {
    w[h] = {h, static_cast<double>(h % 24) * 10.0, 5.0 + 0.001 * static_cast<double>(h), 101000.0 + static_cast<double>(h % 7),
            0.1 * static_cast<double>(h % 50)};
  }
  return w;
}

void write_lines(const std::filesystem::path& p, const std::vector<std::string>& lines) {
  std::ofstream out(p);
  for (const auto& l : lines) out << l << '\n';
}

std::vector<std::string> weather_lines(std::size_t skip = static_cast<std::size_t>(-1)) {
  std::vector<std::string> lines = {"hour_utc,ghi_wm2,temp_c,pressure_pa,wind_ms"};
  for (std::size_t h = 0; h < 8760; ++h) {
    if (h != skip) lines.push_back(std::to_string(h) + ",0,10,101325,3");
  }
  return lines;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Ingest, WeatherRoundTrip) {
  const auto dir = tmp_dir("ingest_weather");
  const auto cal = dutch_calendar(2014);
  const auto w = sample_weather();
  write_weather(dir / "w.csv", w);
  const auto back = load_weather(dir / "w.csv", cal);
  ASSERT_EQ(back.size(), 8760u);
  for (std::size_t h = 0; h < w.size(); ++h) {
    EXPECT_EQ(back[h].hour_index, h);
    EXPECT_EQ(back[h].ghi, w[h].ghi);
    EXPECT_EQ(back[h].temp, w[h].temp);
    EXPECT_EQ(back[h].pressure, w[h].pressure);
    EXPECT_EQ(back[h].wind_speed_10m, w[h].wind_speed_10m);
  }
}

TEST(Ingest, WeatherRowsAreSortedByHour) {
  const auto dir = tmp_dir("ingest_sorted");
  auto lines = weather_lines();
  std::swap(lines[1], lines[8760]);
  write_lines(dir / "w.csv", lines);
  const auto w = load_weather(dir / "w.csv", dutch_calendar(2014));
  for (std::size_t h = 0; h < w.size(); ++h) ASSERT_EQ(w[h].hour_index, h);
}

TEST(Ingest, MissingHourIsReportedAsGap) {
  const auto dir = tmp_dir("ingest_gap");
  write_lines(dir / "w.csv", weather_lines(100));
  const auto msg = error_of([&] { load_weather(dir / "w.csv", dutch_calendar(2014)); });
  EXPECT_NE(msg.find("gap at hour 100"), std::string::npos) << msg;
}

TEST(Ingest, NegativeWindIsRejected) {
  const auto dir = tmp_dir("ingest_wind");
  auto lines = weather_lines();
  lines[11] = "10,0,10,101325,-1";
  write_lines(dir / "w.csv", lines);
  const auto msg = error_of([&] { load_weather(dir / "w.csv", dutch_calendar(2014)); });
  EXPECT_NE(msg.find("negative wind speed"), std::string::npos) << msg;
  EXPECT_NE(msg.find("row 12"), std::string::npos) << msg;
}

TEST(Ingest, NonNumericCellNamesRow) {
  const auto dir = tmp_dir("ingest_nan");
  auto lines = weather_lines();
  lines[5] = "4,abc,10,101325,3";
  write_lines(dir / "w.csv", lines);
  const auto msg = error_of([&] { load_weather(dir / "w.csv", dutch_calendar(2014)); });
  EXPECT_NE(msg.find("row 6"), std::string::npos) << msg;
  EXPECT_NE(msg.find("ghi_wm2"), std::string::npos) << msg;
}

TEST(Ingest, DuplicateTimestamp) {
  const auto dir = tmp_dir("ingest_dup");
  auto lines = weather_lines();
  lines.push_back("7,0,10,101325,3");
  write_lines(dir / "w.csv", lines);
  const auto msg = error_of([&] { load_weather(dir / "w.csv", dutch_calendar(2014)); });
  EXPECT_NE(msg.find("duplicate timestamp for hour 7"), std::string::npos) << msg;
}

TEST(Ingest, HeaderMismatchAndMissingFile) {
  const auto dir = tmp_dir("ingest_header");
  auto lines = weather_lines();
  lines[0] = "hour,ghi,temp,pressure,wind";
  write_lines(dir / "w.csv", lines);
  EXPECT_THROW(load_weather(dir / "w.csv", dutch_calendar(2014)), ValidationError);
  EXPECT_THROW(load_weather(dir / "missing.csv", dutch_calendar(2014)), IoError);
}

TEST(Ingest, UniformProfileNormalisesToConstantPower) {
  const auto p = normalize_profile(HourlySeries::constant(0.3, Unit::weight, 2014), 8760.0);
  for (std::size_t h = 0; h < p.size(); ++h) ASSERT_NEAR(p[h], 1.0, 1e-12);
  EXPECT_EQ(p.unit(), Unit::kW);
}

TEST(Ingest, ProfileKeepsProportions) {
  std::vector<double> w(8760, 1.0);
  w[0] = 2.0;
  const auto p = normalize_profile(HourlySeries(w, Unit::weight, 2014), 3500.0);
  EXPECT_DOUBLE_EQ(p[0], 2.0 * p[1]);
  EXPECT_NEAR(p.sum(), 3500.0, 3500.0 * 1e-12);
}

TEST(Ingest, FractionFileSumsToAnnualEnergy) {
  const auto dir = tmp_dir("ingest_profile");
  std::vector<double> w(8760);
  for (std::size_t h = 0; h < w.size(); ++h) w[h] = (1.0 + 0.5 * static_cast<double>(h % 24 > 16)) / 10000.0;
  write_series(dir / "p.csv", HourlySeries(w, Unit::weight, 2014), "weight");
  const auto p = load_profile(dir / "p.csv", 3500.0, 2014);
  EXPECT_NEAR(p.sum(), 3500.0, 3500.0 * 1e-6);
  EXPECT_NEAR(p[17] / p[16], 1.5, 1e-12);
}

TEST(Ingest, ProfileAcceptsKilowattColumn) {
  const auto dir = tmp_dir("ingest_kw");
  write_series(dir / "p.csv", HourlySeries::constant(2.0, Unit::kW, 2014), "kw");
  const auto p = load_profile(dir / "p.csv", 876.0, 2014);
  EXPECT_NEAR(p[3], 0.1, 1e-12);
}

TEST(Ingest, ProfileErrors) {
  std::vector<double> w(8760, 1.0);
  w[3] = -1.0;
  EXPECT_THROW(normalize_profile(HourlySeries(w, Unit::weight, 2014), 100.0), ValidationError);
  EXPECT_THROW(normalize_profile(HourlySeries::zeros(Unit::weight, 2014), 100.0), ValidationError);
}

TEST(Ingest, SeriesRoundTrip) {
  const auto dir = tmp_dir("ingest_series");
  std::vector<double> v(8760);
  for (std::size_t h = 0; h < v.size(); ++h) v[h] = 1.0 / (1.0 + static_cast<double>(h)) + 1e-7 * static_cast<double>(h);
  const HourlySeries s(v, Unit::kW, 2014);
  write_series(dir / "s.csv", s, "kw");
  const auto back = load_reference_profile(dir / "s.csv", 2014);
  for (std::size_t h = 0; h < v.size(); ++h) ASSERT_EQ(back[h], v[h]);
}

TEST(Ingest, LeapYearProfileNeeds8784Hours) {
  const auto dir = tmp_dir("ingest_leap");
  write_series(dir / "p.csv", HourlySeries::constant(1.0, Unit::weight, 2014), "weight");
  EXPECT_THROW(load_profile(dir / "p.csv", 100.0, 2016), ValidationError);
  write_series(dir / "q.csv", HourlySeries::constant(1.0, Unit::weight, 2016), "weight");
  EXPECT_EQ(load_profile(dir / "q.csv", 100.0, 2016).size(), 8784u);
}
