#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <chrono>
#include <cstddef>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "urbanmix/error.hpp"
#include "urbanmix/series.hpp"

namespace urbanmix {

using Date = std::chrono::year_month_day;

enum class DayKind { weekday, weekend };

inline std::string_view to_string(DayKind d) { return d == DayKind::weekday ? "weekday" : "weekend"; }

/// Local civil time of one simulation hour.
struct LocalTime {
  Date date;
  int hour = 0;  // 0..23, local clock
  std::chrono::weekday weekday;
};

/// A daylight-saving period: between the two UTC instants the local clock
/// runs `shift_minutes` ahead of standard time.
struct DstPeriod {
  std::chrono::sys_seconds start_utc;
  std::chrono::sys_seconds end_utc;
  int shift_minutes = 60;
};

struct DstRules {
  int standard_offset_minutes = 0;
  std::vector<DstPeriod> periods;
};

namespace detail {

inline int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError("malformed " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

inline std::chrono::sys_days last_sunday(std::chrono::year y, std::chrono::month m) {
  using namespace std::chrono;
  return sys_days{year_month_weekday_last{y, m, weekday_last{Sunday}}};
}

}  // namespace detail

/// Parses an ISO-8601 calendar date (YYYY-MM-DD).
inline Date parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
    throw ValidationError("malformed date: '" + std::string(s) + "'");
  }
  const int y = detail::parse_int(s.substr(0, 4), "date");
  const int m = detail::parse_int(s.substr(5, 2), "date");
  const int d = detail::parse_int(s.substr(8, 2), "date");
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw ValidationError("malformed date: '" + std::string(s) + "'");
  return date;
}

/// Parses a UTC instant of the form YYYY-MM-DDTHH:MM[:SS]Z.
inline std::chrono::sys_seconds parse_utc_instant(std::string_view s) {
  if (s.size() < 17 || s[10] != 'T' || s.back() != 'Z') {
    throw ValidationError("malformed UTC instant: '" + std::string(s) + "'");
  }
  const Date date = parse_date(s.substr(0, 10));
  std::string_view clock = s.substr(11, s.size() - 12);
  int hh = 0, mm = 0, ss = 0;
  if (clock.size() == 5 && clock[2] == ':') {
    hh = detail::parse_int(clock.substr(0, 2), "instant");
    mm = detail::parse_int(clock.substr(3, 2), "instant");
  } else if (clock.size() == 8 && clock[2] == ':' && clock[5] == ':') {
    hh = detail::parse_int(clock.substr(0, 2), "instant");
    mm = detail::parse_int(clock.substr(3, 2), "instant");
    ss = detail::parse_int(clock.substr(6, 2), "instant");
  } else {
    throw ValidationError("malformed UTC instant: '" + std::string(s) + "'");
  }
  if (hh > 23 || mm > 59 || ss > 59) throw ValidationError("malformed UTC instant: '" + std::string(s) + "'");
  return std::chrono::sys_days{date} + std::chrono::hours{hh} + std::chrono::minutes{mm} +
         std::chrono::seconds{ss};
}

inline std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

/// Central European rules: UTC+1, summer time from the last Sunday of March
/// 01:00 UTC to the last Sunday of October 01:00 UTC.
inline DstRules central_european_rules(int year) {
  using namespace std::chrono;
  const auto y = std::chrono::year{year};
  DstRules rules;
  rules.standard_offset_minutes = 60;
  rules.periods.push_back({detail::last_sunday(y, March) + hours{1}, detail::last_sunday(y, October) + hours{1}, 60});
  return rules;
}

/// Gregorian Easter Sunday (anonymous Gregorian algorithm).
inline Date easter_sunday(int year) {
  const int a = year % 19;
  const int b = year / 100;
  const int c = year % 100;
  const int d = b / 4;
  const int e = b % 4;
  const int f = (b + 8) / 25;
  const int g = (b - f + 1) / 3;
  const int h = (19 * a + b - d - g + 15) % 30;
  const int i = c / 4;
  const int k = c % 4;
  const int l = (32 + 2 * e + 2 * i - h - k) % 7;
  const int m = (a + 11 * h + 22 * l) / 451;
  const int month = (h + l - 7 * m + 114) / 31;
  const int day = ((h + l - 7 * m + 114) % 31) + 1;
  return Date{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
              std::chrono::day{static_cast<unsigned>(day)}};
}

/// Official Dutch public holidays with a general day off: New Year, Easter
/// Sunday and Monday, King's Day (moved to the 26th when the 27th of April is
/// a Sunday), Ascension, Whit Sunday and Monday, Christmas and Boxing Day.
/// Liberation Day and Good Friday are not included.
inline std::vector<Date> dutch_holidays(int year) {
  using namespace std::chrono;
  const auto y = std::chrono::year{year};
  const sys_days easter{easter_sunday(year)};
  std::vector<Date> out;
  out.emplace_back(y / January / 1);
  out.emplace_back(easter);
  out.emplace_back(easter + days{1});
  Date kings{y / April / 27};
  if (year < 2014) kings = Date{y / April / 30};
  if (weekday{sys_days{kings}} == Sunday) kings = Date{sys_days{kings} - days{1}};
  out.emplace_back(kings);
  out.emplace_back(easter + days{39});
  out.emplace_back(easter + days{49});
  out.emplace_back(easter + days{50});
  out.emplace_back(y / December / 25);
  out.emplace_back(y / December / 26);
  std::sort(out.begin(), out.end());
  return out;
}

/// Simulation calendar: maps UTC hour indices 0..N-1 of one year onto local
/// civil time, weekday, and holiday status.
class Calendar {
 public:
  Calendar() : Calendar(2014, {}, DstRules{}) {}

  Calendar(int year, const std::vector<Date>& holidays, DstRules rules, bool holidays_as_weekend = true)
      : year_(year), rules_(std::move(rules)), holidays_as_weekend_(holidays_as_weekend) {
    if (year < 1970) throw ValidationError("calendar year must be >= 1970");
    for (const auto& d : holidays) {
      if (!d.ok()) throw ValidationError("invalid holiday date");
      if (static_cast<int>(d.year()) != year) {
        throw ValidationError("holiday " + format_date(d) + " is outside year " + std::to_string(year));
      }
      holidays_.insert(std::chrono::sys_days{d});
    }
    for (const auto& p : rules_.periods) {
      if (p.end_utc <= p.start_utc) throw ValidationError("DST period ends before it starts");
    }
  }

  [[nodiscard]] int year() const { return year_; }
  [[nodiscard]] std::size_t hour_count() const { return hours_in_year(year_); }
  [[nodiscard]] const DstRules& dst_rules() const { return rules_; }
  [[nodiscard]] bool holidays_as_weekend() const { return holidays_as_weekend_; }
  [[nodiscard]] std::vector<Date> holidays() const {
    std::vector<Date> out;
    for (auto d : holidays_) out.emplace_back(d);
    return out;
  }

  [[nodiscard]] std::chrono::sys_seconds utc_instant(std::size_t hour) const {
    using namespace std::chrono;
    return sys_days{std::chrono::year{year_} / January / 1} + hours{static_cast<long>(hour)};
  }

  /// Offset of local civil time from UTC at the given hour, in minutes.
  [[nodiscard]] int offset_minutes(std::size_t hour) const {
    const auto t = utc_instant(hour);
    int offset = rules_.standard_offset_minutes;
    for (const auto& p : rules_.periods) {
      if (t >= p.start_utc && t < p.end_utc) offset += p.shift_minutes;
    }
    return offset;
  }

  [[nodiscard]] LocalTime local_time(std::size_t hour) const {
    using namespace std::chrono;
    const auto local = utc_instant(hour) + minutes{offset_minutes(hour)};
    const auto day = floor<days>(local);
    const auto hh = duration_cast<hours>(local - day).count();
    return LocalTime{Date{day}, static_cast<int>(hh), weekday{day}};
  }

  [[nodiscard]] bool is_holiday(const Date& d) const { return holidays_.contains(std::chrono::sys_days{d}); }

  [[nodiscard]] DayKind day_kind(std::size_t hour) const {
    const LocalTime lt = local_time(hour);
    using std::chrono::Saturday;
    using std::chrono::Sunday;
    if (lt.weekday == Saturday || lt.weekday == Sunday) return DayKind::weekend;
    if (holidays_as_weekend_ && is_holiday(lt.date)) return DayKind::weekend;
    return DayKind::weekday;
  }

 private:
  int year_;
  std::set<std::chrono::sys_days> holidays_;
  DstRules rules_;
  bool holidays_as_weekend_ = true;
};

inline Calendar build_calendar(int year, const std::vector<Date>& holidays, DstRules rules,
                               bool holidays_as_weekend = true) {
  return Calendar(year, holidays, std::move(rules), holidays_as_weekend);
}

/// Calendar with Dutch holidays and Central European summer time.
inline Calendar dutch_calendar(int year) {
  return Calendar(year, dutch_holidays(year), central_european_rules(year));
}

/// Builds a calendar from its JSON config:
///
///   {"year": 2014, "utc_offset_minutes": 60, "holidays": ["2014-01-01", ...],
///    "dst": [{"start": "2014-03-30T01:00Z", "end": "2014-10-26T01:00Z", "shift_minutes": 60}],
///    "holidays_as_weekend": true}
inline Calendar calendar_from_json(const nlohmann::json& j) {
  try {
    const int year = j.at("year").get<int>();
    DstRules rules;
    rules.standard_offset_minutes = j.value("utc_offset_minutes", 0);
    if (j.contains("dst")) {
      for (const auto& p : j.at("dst")) {
        rules.periods.push_back({parse_utc_instant(p.at("start").get<std::string>()),
                                 parse_utc_instant(p.at("end").get<std::string>()), p.value("shift_minutes", 60)});
      }
    }
    std::vector<Date> holidays;
    if (j.contains("holidays")) {
      for (const auto& h : j.at("holidays")) holidays.push_back(parse_date(h.get<std::string>()));
    }
    return Calendar(year, holidays, rules, j.value("holidays_as_weekend", true));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("calendar config: ") + e.what());
  }
}

inline nlohmann::json calendar_to_json(const Calendar& cal) {
  nlohmann::json j;
  j["year"] = cal.year();
  j["utc_offset_minutes"] = cal.dst_rules().standard_offset_minutes;
  j["holidays_as_weekend"] = cal.holidays_as_weekend();
  auto& hol = j["holidays"] = nlohmann::json::array();
  for (const auto& d : cal.holidays()) hol.push_back(format_date(d));
  auto& dst = j["dst"] = nlohmann::json::array();
  for (const auto& p : cal.dst_rules().periods) {
    auto fmt = [](std::chrono::sys_seconds t) {
      const auto day = std::chrono::floor<std::chrono::days>(t);
      const auto hh = std::chrono::duration_cast<std::chrono::hours>(t - day).count();
      const auto mm = std::chrono::duration_cast<std::chrono::minutes>(t - day).count() % 60;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%sT%02ld:%02ldZ", format_date(Date{day}).c_str(), static_cast<long>(hh),
                    static_cast<long>(mm));
      return std::string(buf);
    };
    dst.push_back({{"start", fmt(p.start_utc)}, {"end", fmt(p.end_utc)}, {"shift_minutes", p.shift_minutes}});
  }
  return j;
}

inline Calendar load_calendar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open calendar config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("calendar config " + path + ": " + e.what());
  }
  return calendar_from_json(j);
}

}  // namespace urbanmix
