#pragma once

// Synthetic stand-ins for the inputs an exposure model normally takes from
// census tables, activity diaries and monitoring networks: a population of
// children, a daily activity template, and an hourly ambient ozone series.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ozrisk/errors.hpp"
#include "ozrisk/random.hpp"
#include "ozrisk/season.hpp"

namespace ozrisk {

struct Person {
  std::uint64_t id = 0;
  int age = 0;         // years
  double bmi = 0.0;    // kg/m^2
  double u = 0.0;      // sensitivity term, filled by the engine
};

/// Ages are uniform over [age_min, age_max]; BMI is lognormal with a median
/// linear in age. The defaults are placeholders, not fitted to survey data.
struct DemographicsConfig {
  int age_min = 5;
  int age_max = 18;
  double bmi_median_at_age_min = 15.5;
  double bmi_median_slope = 0.45;  // per year of age
  double bmi_log_sd = 0.15;

  void validate() const {
    if (age_min < 0 || age_max < age_min) throw ConfigError("empty or negative age range");
    if (!(bmi_median_at_age_min > 0.0) || !std::isfinite(bmi_median_slope) ||
        !(bmi_log_sd >= 0.0) || !std::isfinite(bmi_log_sd))
      throw ConfigError("invalid BMI distribution parameters");
    if (bmi_median_at_age_min + bmi_median_slope * (age_max - age_min) <= 0.0)
      throw ConfigError("BMI median must stay positive across the age range");
  }
};

/// Person `index` depends only on (config, seed, index).
inline Person make_person(std::uint64_t index, const DemographicsConfig& demo, std::uint64_t seed) {
  RandomStream stream(seed, index, Term::Demographics);
  const int span = demo.age_max - demo.age_min + 1;
  const int age = demo.age_min + std::min(span - 1, static_cast<int>(stream.next_uniform() * span));
  const double median = demo.bmi_median_at_age_min + demo.bmi_median_slope * (age - demo.age_min);
  const double bmi = median * std::exp(demo.bmi_log_sd * stream.next_normal());
  return {index, age, bmi, 0.0};
}

inline std::vector<Person> generate_population(std::size_t n, const DemographicsConfig& demo,
                                               std::uint64_t seed) {
  if (n == 0) throw ConfigError("population size must be > 0");
  demo.validate();
  std::vector<Person> people;
  people.reserve(n);
  for (std::size_t i = 0; i < n; ++i) people.push_back(make_person(i, demo, seed));
  return people;
}

enum class Location { Indoor, Outdoor };

inline std::string_view to_string(Location l) { return l == Location::Indoor ? "indoor" : "outdoor"; }

inline Location parse_location(std::string_view s) {
  if (s == "indoor") return Location::Indoor;
  if (s == "outdoor") return Location::Outdoor;
  throw ConfigError("unknown location '" + std::string(s) + "' (expected indoor or outdoor)");
}

struct ActivityBlock {
  int start_minute = 0;       // minute of day
  int duration = 60;          // minutes, 1..60
  double ventilation = 0.0;   // L/min/m^2
  Location location = Location::Indoor;
};

/// One day of activity, repeated every day of the season. Ventilation of
/// each person is the block value times a lognormal person multiplier.
struct ActivityTemplate {
  std::vector<ActivityBlock> blocks;
  double indoor_factor = 0.3;
  double outdoor_factor = 1.0;
  double ventilation_log_sd = 0.2;

  void validate() const {
    if (blocks.empty()) throw ConfigError("activity template has no blocks");
    int expected = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto& b = blocks[i];
      const std::string where = "activity block " + std::to_string(i + 1);
      if (b.start_minute != expected)
        throw ConfigError(where + " starts at minute " + std::to_string(b.start_minute) +
                          ", expected " + std::to_string(expected) +
                          " (blocks must be contiguous and cover 24h)");
      if (b.duration < 1 || b.duration > 60)
        throw ConfigError(where + " duration must be in [1, 60] minutes");
      if (!(b.ventilation >= 0.0) || !std::isfinite(b.ventilation))
        throw ConfigError(where + " ventilation must be >= 0");
      expected += b.duration;
    }
    if (expected != 1440)
      throw ConfigError("activity template covers " + std::to_string(expected) +
                        " minutes, expected 1440");
    for (double f : {indoor_factor, outdoor_factor, ventilation_log_sd}) {
      if (!(f >= 0.0) || !std::isfinite(f)) throw ConfigError("activity factors must be >= 0");
    }
  }

  double factor(Location l) const { return l == Location::Indoor ? indoor_factor : outdoor_factor; }
};

/// School-day pattern for a child. Ventilation values are placeholders.
inline ActivityTemplate default_activity_template() {
  ActivityTemplate t;
  auto add = [&t](int duration, double vent, Location loc) {
    const int start = t.blocks.empty() ? 0 : t.blocks.back().start_minute + t.blocks.back().duration;
    t.blocks.push_back({start, duration, vent, loc});
  };
  using enum Location;
  for (int h = 0; h < 7; ++h) add(60, 5.0, Indoor);  // sleep
  add(30, 9.0, Indoor);
  add(30, 14.0, Outdoor);                             // walk to school
  for (int h = 0; h < 4; ++h) add(60, 8.0, Indoor);   // class
  add(30, 9.0, Indoor);
  add(30, 24.0, Outdoor);                             // recess
  for (int h = 0; h < 2; ++h) add(60, 8.0, Indoor);
  add(30, 14.0, Outdoor);                             // walk home
  add(30, 30.0, Outdoor);                             // play
  add(60, 32.0, Outdoor);
  add(30, 20.0, Outdoor);
  add(30, 10.0, Indoor);
  for (int h = 0; h < 3; ++h) add(60, 8.0, Indoor);
  for (int h = 0; h < 3; ++h) add(60, 5.0, Indoor);   // sleep
  return t;
}

/// Hourly ambient ozone in ppb, one value per season hour.
struct OzoneSeries {
  std::vector<double> ppb;

  void validate(const Season& season) const {
    if (ppb.size() != season.n_hours())
      throw InputError("ozone series has " + std::to_string(ppb.size()) + " hours, season has " +
                       std::to_string(season.n_hours()));
    for (std::size_t i = 0; i < ppb.size(); ++i) {
      if (!(ppb[i] >= 0.0) || !std::isfinite(ppb[i]))
        throw InputError("ozone value at hour " + std::to_string(i) + " must be finite and >= 0");
    }
  }
};

inline OzoneSeries zero_ozone_series(const Season& season) {
  return {std::vector<double>(season.n_hours(), 0.0)};
}

inline OzoneSeries constant_ozone_series(const Season& season, double ppb) {
  return {std::vector<double>(season.n_hours(), ppb)};
}

/// Parameters for a synthetic series with a smooth seasonal cycle, an
/// afternoon peak and lognormal day-to-day variation.
struct SyntheticOzoneParams {
  double night_ppb = 22.0;
  double summer_peak_ppb = 48.0;
  double shoulder_peak_ppb = 34.0;  // peak level at the season edges
  double peak_hour = 15.0;
  double peak_width_hours = 3.5;
  double daily_log_sd = 0.2;
};

inline OzoneSeries synthetic_ozone_series(const Season& season, const SyntheticOzoneParams& p,
                                          std::uint64_t seed) {
  OzoneSeries s;
  s.ppb.reserve(season.n_hours());
  const double n = season.n_days();
  for (std::uint32_t d = 0; d < season.n_days(); ++d) {
    RandomStream stream(seed, d, Term::Ozone);
    const double phase = std::sin(std::numbers::pi * (d + 0.5) / n);
    const double peak = (p.shoulder_peak_ppb + (p.summer_peak_ppb - p.shoulder_peak_ppb) * phase) *
                        std::exp(p.daily_log_sd * stream.next_normal());
    for (int h = 0; h < 24; ++h) {
      const double z = (h - p.peak_hour) / p.peak_width_hours;
      const double v = p.night_ppb + std::max(0.0, peak - p.night_ppb) * std::exp(-0.5 * z * z);
      s.ppb.push_back(std::round(v * 10.0) / 10.0);
    }
  }
  return s;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// "YYYY-MM-DDTHH:MM[:SS]" or with a space separator. Returns false when
/// malformed; otherwise fills date and hour and checks minutes/seconds are 0.
inline bool parse_hour_timestamp(std::string_view s, std::chrono::year_month_day& date, int& hour,
                                 bool& on_the_hour) {
  if (s.size() != 16 && s.size() != 19) return false;
  if (s[10] != 'T' && s[10] != ' ') return false;
  if (s[13] != ':' || (s.size() == 19 && s[16] != ':')) return false;
  try {
    date = parse_date(s.substr(0, 10));
  } catch (const ConfigError&) {
    return false;
  }
  int minute = 0, second = 0;
  if (!parse_int(s.substr(11, 2), hour) || !parse_int(s.substr(14, 2), minute)) return false;
  if (s.size() == 19 && !parse_int(s.substr(17, 2), second)) return false;
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 59) return false;
  on_the_hour = minute == 0 && second == 0;
  return true;
}

}  // namespace detail

/// Read the hourly CSV (header `timestamp,ppb` or `timestamp,ppm`, one row per
/// season hour in order). Values are stored in ppb. Errors carry the
/// offending line number.
inline OzoneSeries parse_ozone_csv(std::istream& in, const Season& season) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw InputError("empty ozone file; expected header 'timestamp,ppb'", 1);
  ++line_no;
  const auto header = detail::trim(line);
  double to_ppb = 1.0;
  if (header == "timestamp,ppm") {
    to_ppb = 1000.0;
  } else if (header != "timestamp,ppb") {
    throw InputError("header must be 'timestamp,ppb' or 'timestamp,ppm', got '" +
                         std::string(header) + "'",
                     1);
  }

  OzoneSeries series;
  series.ppb.reserve(season.n_hours());
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = detail::trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
      throw InputError("expected 2 comma-separated fields", line_no);
    const auto ts = detail::trim(row.substr(0, comma));
    const auto val = detail::trim(row.substr(comma + 1));

    std::chrono::year_month_day date;
    int hour = 0;
    bool on_hour = false;
    if (!detail::parse_hour_timestamp(ts, date, hour, on_hour))
      throw InputError("malformed timestamp '" + std::string(ts) + "'", line_no);
    const auto index = series.ppb.size();
    if (index >= season.n_hours())
      throw InputError("more rows than season hours (" + std::to_string(season.n_hours()) + ")",
                       line_no);
    if (!on_hour || date != season.date_of(static_cast<std::uint32_t>(index / 24)) ||
        hour != static_cast<int>(index % 24))
      throw InputError("timestamp '" + std::string(ts) + "' out of sequence, expected " +
                           season.timestamp(static_cast<std::uint32_t>(index)),
                       line_no);

    double ppb = 0.0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), ppb);
    if (ec != std::errc{} || ptr != val.data() + val.size() || !std::isfinite(ppb))
      throw InputError("malformed ozone value '" + std::string(val) + "'", line_no);
    if (ppb < 0.0) throw InputError("negative ozone value " + std::string(val), line_no);
    series.ppb.push_back(ppb * to_ppb);
  }
  if (series.ppb.size() != season.n_hours())
    throw InputError("expected " + std::to_string(season.n_hours()) + " rows for season " +
                     season.to_string() + ", found " + std::to_string(series.ppb.size()));
  return series;
}

inline OzoneSeries load_ozone_series(const std::string& path, const Season& season) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open ozone file '" + path + "'");
  try {
    return parse_ozone_csv(in, season);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void write_ozone_csv(std::ostream& out, const OzoneSeries& series, const Season& season) {
  series.validate(season);
  out << "timestamp,ppb\n";
  char buf[32];
  for (std::uint32_t h = 0; h < series.ppb.size(); ++h) {
    std::snprintf(buf, sizeof buf, "%.1f", series.ppb[h]);
    out << season.timestamp(h) << ',' << buf << '\n';
  }
}

/// A season-long exposure scenario. With `beta3_zero` the exposure-response
/// slope is forced to zero so ozone has no effect regardless of the series.
struct Scenario {
  OzoneSeries ozone;
  bool beta3_zero = false;
};

inline Scenario zero_ozone_scenario(const Season& season) {
  return {zero_ozone_series(season), true};
}

struct EventRecord {
  double start = 0.0;          // minutes since season start
  double duration = 0.0;       // minutes
  double concentration = 0.0;  // ppm
  double ventilation = 0.0;    // L/min/m^2
};

/// Lognormal ventilation multiplier for a person, median 1.
inline double ventilation_scale(const Person& person, const ActivityTemplate& tmpl,
                                std::uint64_t seed) {
  if (tmpl.ventilation_log_sd == 0.0) return 1.0;
  RandomStream stream(seed, person.id, Term::Ventilation);
  return std::exp(tmpl.ventilation_log_sd * stream.next_normal());
}

/// Fill `out` with the person's season of events: the template repeated
/// daily, each event exposed to the ambient value of its start hour times
/// the block's microenvironment factor, converted from ppb to ppm.
inline void generate_timeline(const Person& person, const ActivityTemplate& tmpl,
                              const Season& season, const OzoneSeries& ozone, std::uint64_t seed,
                              std::vector<EventRecord>& out) {
  out.clear();
  out.reserve(static_cast<std::size_t>(season.n_days()) * tmpl.blocks.size());
  const double scale = ventilation_scale(person, tmpl, seed);
  for (std::uint32_t d = 0; d < season.n_days(); ++d) {
    const double day_start = d * 1440.0;
    for (const auto& b : tmpl.blocks) {
      const double ambient = ozone.ppb[d * 24u + static_cast<std::uint32_t>(b.start_minute / 60)];
      out.push_back({day_start + b.start_minute, static_cast<double>(b.duration),
                     ambient * tmpl.factor(b.location) / 1000.0, b.ventilation * scale});
    }
  }
}

inline std::vector<EventRecord> generate_timeline(const Person& person, const ActivityTemplate& tmpl,
                                                  const Season& season, const OzoneSeries& ozone,
                                                  std::uint64_t seed) {
  tmpl.validate();
  ozone.validate(season);
  std::vector<EventRecord> events;
  generate_timeline(person, tmpl, season, ozone, seed, events);
  return events;
}

}  // namespace ozrisk
