#pragma once

// Run configuration: a single YAML file. Every key is checked against the
// known set so a misspelt bound name fails loudly instead of silently
// falling back to a default. After parsing, all defaults are materialized
// and `echo_config` writes a file that reproduces the run exactly.

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "ozrisk/engine.hpp"
#include "ozrisk/errors.hpp"
#include "ozrisk/population.hpp"
#include "ozrisk/season.hpp"

namespace ozrisk {

struct RunConfig {
  SimulationSetup setup;
  RiskQuery risk;
  bool zero_ozone = false;
  std::string ozone_file;  // absolute or relative to the working directory
  std::string out_dir = "out";
};

namespace detail {

inline std::string shortest(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

class ConfigReader {
 public:
  explicit ConfigReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    const auto mark = node.Mark();
    std::string where = source_;
    if (!mark.is_null()) where += ":" + std::to_string(mark.line + 1);
    throw ConfigError(where + ": " + msg);
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(source_ + ": " + msg); }

  void check_keys(const YAML::Node& map, std::string_view section,
                  std::initializer_list<std::string_view> allowed) const {
    if (!map.IsMap()) fail(map, "section '" + std::string(section) + "' must be a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        std::string list;
        for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        fail(kv.first, "unknown key '" + key + "' in section '" + std::string(section) +
                           "' (allowed: " + list + ")");
      }
    }
  }

  YAML::Node section(const YAML::Node& root, const char* name, bool required) const {
    const YAML::Node n = root[name];
    if (!n && required) fail(root, "missing required section '" + std::string(name) + "'");
    return n;
  }

  double number(const YAML::Node& map, const char* key, std::string_view section) const {
    const YAML::Node n = map[key];
    if (!n) fail(map, "missing '" + std::string(key) + "' in section '" + std::string(section) + "'");
    return to_number(n, std::string(section) + "." + key);
  }

  double number_or(const YAML::Node& map, const char* key, double fallback,
                   std::string_view section) const {
    const YAML::Node n = map[key];
    return n ? to_number(n, std::string(section) + "." + key) : fallback;
  }

  double to_number(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, field + " must be a number");
    const std::string s = n.Scalar();
    if (s == "inf" || s == ".inf" || s == "infinity" || s == "unbounded")
      return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* first = s.data() + (s.size() > 1 && s[0] == '+' ? 1 : 0);
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || std::isnan(v))
      fail(n, field + " must be a number, got '" + s + "'");
    return v;
  }

  long long integer(const YAML::Node& n, const std::string& field) const {
    const double v = to_number(n, field);
    if (!std::isfinite(v) || v != std::floor(v)) fail(n, field + " must be an integer");
    return static_cast<long long>(v);
  }

  std::string string(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, field + " must be a scalar");
    return n.Scalar();
  }

  bool boolean(const YAML::Node& n, const std::string& field) const {
    const auto s = string(n, field);
    if (s == "true" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "no" || s == "off") return false;
    fail(n, field + " must be true or false, got '" + s + "'");
  }

  template <typename F>
  void validated(const YAML::Node& n, F&& check) const {
    try {
      check();
    } catch (const ConfigError& e) {
      fail(n, e.what());
    }
  }

 private:
  std::string source_;
};

inline int parse_clock(const ConfigReader& r, const YAML::Node& n) {
  const auto s = r.string(n, "activity.blocks.start");
  int h = 0, m = 0;
  if (s.size() != 5 || s[2] != ':' || !parse_int(s.substr(0, 2), h) ||
      !parse_int(s.substr(3, 2), m) || h < 0 || h > 23 || m < 0 || m > 59)
    r.fail(n, "block start must be HH:MM, got '" + s + "'");
  return h * 60 + m;
}

inline std::string format_clock(int minute) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minute / 60, minute % 60);
  return buf;
}

}  // namespace detail

/// Parse a YAML config held in memory. `source` names it in diagnostics and
/// `base_dir` anchors a relative ozone_file.
inline RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>",
                                   const std::filesystem::path& base_dir = {}) {
  detail::ConfigReader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) r.fail("top level must be a mapping");
  r.check_keys(root, "top level",
               {"er_function", "variability", "population", "season", "scenario", "activity",
                "risk", "seed", "output"});

  RunConfig cfg;
  auto& s = cfg.setup;

  // er_function (required)
  {
    const auto er = r.section(root, "er_function", true);
    r.check_keys(er, "er_function",
                 {"variant", "beta1", "beta2", "beta3", "beta4", "beta5", "beta6", "beta8", "beta9",
                  "sigma_u", "sigma_nu1", "sigma_nu2", "age_mean", "bmi_mean"});
    if (!er["variant"]) r.fail(er, "missing 'variant' in section 'er_function'");
    r.validated(er["variant"], [&] { s.er.variant = parse_variant(r.string(er["variant"], "variant")); });
    const char* sec = "er_function";
    s.er.beta1 = r.number(er, "beta1", sec);
    s.er.beta2 = r.number(er, "beta2", sec);
    s.er.beta3 = r.number(er, "beta3", sec);
    s.er.beta4 = r.number(er, "beta4", sec);
    s.er.beta5 = r.number(er, "beta5", sec);
    s.er.beta6 = r.number(er, "beta6", sec);
    s.er.beta8 = r.number_or(er, "beta8", 0.0, sec);
    s.er.beta9 = r.number_or(er, "beta9", 0.0, sec);
    s.er.sigma_u = r.number(er, "sigma_u", sec);
    s.er.sigma_nu1 = r.number(er, "sigma_nu1", sec);
    s.er.sigma_nu2 = s.er.variant == ErVariant::MSS2013 ? r.number(er, "sigma_nu2", sec)
                                                        : r.number_or(er, "sigma_nu2", 0.0, sec);
    s.er.age_mean = r.number(er, "age_mean", sec);
    s.er.bmi_mean = r.number_or(er, "bmi_mean", 0.0, sec);
    r.validated(er, [&] { s.er.validate(); });
  }

  if (const auto v = r.section(root, "variability", false)) {
    r.check_keys(v, "variability", {"bounds", "redraw"});
    if (const auto b = v["bounds"]) {
      std::vector<YAML::Node> items;
      if (b.IsSequence()) {
        for (const auto& x : b) items.push_back(x);
      } else if (b.IsScalar()) {
        std::istringstream ss(b.Scalar());
        std::string tok;
        while (ss >> tok) {
          YAML::Node x(tok);
          items.push_back(x);
        }
      }
      if (items.size() != 3) r.fail(b, "variability.bounds must list 3 values: u nu1 nu2");
      double vals[3];
      for (int i = 0; i < 3; ++i) {
        vals[i] = r.to_number(items[i], "variability.bounds");
        if (vals[i] < 0.0) r.fail(b, "variability.bounds must be >= 0 (or inf)");
      }
      s.variability.bound_u = vals[0];
      s.variability.bound_nu1 = vals[1];
      s.variability.bound_nu2 = vals[2];
    }
    if (const auto rd = v["redraw"])
      r.validated(rd, [&] { s.variability.redraw = parse_redraw(r.string(rd, "variability.redraw")); });
  }

  if (const auto p = r.section(root, "population", false)) {
    r.check_keys(p, "population",
                 {"n", "age_min", "age_max", "bmi_median_at_age_min", "bmi_median_slope",
                  "bmi_log_sd"});
    if (p["n"]) {
      const auto n = r.integer(p["n"], "population.n");
      if (n <= 0) r.fail(p["n"], "population.n must be > 0");
      s.n_persons = static_cast<std::size_t>(n);
    }
    if (p["age_min"]) s.demographics.age_min = static_cast<int>(r.integer(p["age_min"], "population.age_min"));
    if (p["age_max"]) s.demographics.age_max = static_cast<int>(r.integer(p["age_max"], "population.age_max"));
    s.demographics.bmi_median_at_age_min =
        r.number_or(p, "bmi_median_at_age_min", s.demographics.bmi_median_at_age_min, "population");
    s.demographics.bmi_median_slope =
        r.number_or(p, "bmi_median_slope", s.demographics.bmi_median_slope, "population");
    s.demographics.bmi_log_sd = r.number_or(p, "bmi_log_sd", s.demographics.bmi_log_sd, "population");
    r.validated(p, [&] { s.demographics.validate(); });
  }
  if (s.n_persons == 0) s.n_persons = 60000;

  if (const auto se = r.section(root, "season", false)) {
    r.check_keys(se, "season", {"start", "end"});
    if (!se["start"] || !se["end"]) r.fail(se, "season needs both 'start' and 'end'");
    r.validated(se, [&] {
      s.season = Season(parse_date(r.string(se["start"], "season.start")),
                        parse_date(r.string(se["end"], "season.end")));
    });
  }

  if (const auto a = r.section(root, "activity", false)) {
    r.check_keys(a, "activity", {"indoor_factor", "outdoor_factor", "ventilation_log_sd", "blocks"});
    s.activity.indoor_factor = r.number_or(a, "indoor_factor", s.activity.indoor_factor, "activity");
    s.activity.outdoor_factor = r.number_or(a, "outdoor_factor", s.activity.outdoor_factor, "activity");
    s.activity.ventilation_log_sd =
        r.number_or(a, "ventilation_log_sd", s.activity.ventilation_log_sd, "activity");
    if (const auto blocks = a["blocks"]) {
      if (!blocks.IsSequence()) r.fail(blocks, "activity.blocks must be a list");
      s.activity.blocks.clear();
      for (const auto& b : blocks) {
        r.check_keys(b, "activity.blocks", {"start", "duration", "ventilation", "location"});
        ActivityBlock blk;
        if (!b["start"] || !b["duration"] || !b["ventilation"] || !b["location"])
          r.fail(b, "activity block needs start, duration, ventilation and location");
        blk.start_minute = detail::parse_clock(r, b["start"]);
        blk.duration = static_cast<int>(r.integer(b["duration"], "activity.blocks.duration"));
        blk.ventilation = r.to_number(b["ventilation"], "activity.blocks.ventilation");
        r.validated(b["location"], [&] {
          blk.location = parse_location(r.string(b["location"], "activity.blocks.location"));
        });
        s.activity.blocks.push_back(blk);
      }
    }
    r.validated(a, [&] { s.activity.validate(); });
  }

  if (const auto rk = r.section(root, "risk", false)) {
    r.check_keys(rk, "risk", {"threshold", "min_days"});
    cfg.risk.threshold = r.number_or(rk, "threshold", cfg.risk.threshold, "risk");
    if (rk["min_days"]) {
      const auto d = r.integer(rk["min_days"], "risk.min_days");
      if (d < 1) r.fail(rk["min_days"], "risk.min_days must be >= 1");
      cfg.risk.min_days = static_cast<std::uint32_t>(d);
    }
    r.validated(rk, [&] { cfg.risk.validate(); });
  }

  if (const auto sd = root["seed"]) {
    const auto v = r.integer(sd, "seed");
    if (v < 0) r.fail(sd, "seed must be >= 0");
    s.master_seed = static_cast<std::uint64_t>(v);
  }

  if (const auto o = r.section(root, "output", false)) {
    r.check_keys(o, "output", {"dir"});
    if (o["dir"]) cfg.out_dir = r.string(o["dir"], "output.dir");
  }

  const auto sc = r.section(root, "scenario", true);
  r.check_keys(sc, "scenario", {"zero_ozone", "ozone_file"});
  if (sc["zero_ozone"]) cfg.zero_ozone = r.boolean(sc["zero_ozone"], "scenario.zero_ozone");
  if (sc["ozone_file"]) {
    std::filesystem::path p = r.string(sc["ozone_file"], "scenario.ozone_file");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    cfg.ozone_file = p.lexically_normal().string();
  }
  if (!cfg.zero_ozone && cfg.ozone_file.empty())
    r.fail(sc, "scenario needs 'ozone_file' or 'zero_ozone: true'");
  return cfg;
}

/// Load the scenario's ozone series (or an all-zero one) into the setup.
inline void load_scenario(RunConfig& cfg) {
  auto& s = cfg.setup;
  s.scenario.beta3_zero = cfg.zero_ozone;
  s.scenario.ozone = cfg.ozone_file.empty() ? zero_ozone_series(s.season)
                                            : load_ozone_series(cfg.ozone_file, s.season);
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path, std::filesystem::path(path).parent_path());
}

/// The fully materialized configuration as YAML; parsing it back yields an
/// identical RunConfig.
inline std::string echo_config(const RunConfig& cfg) {
  using detail::shortest;
  const auto& s = cfg.setup;
  std::ostringstream o;
  o << "er_function:\n"
    << "  variant: " << to_string(s.er.variant) << '\n'
    << "  beta1: " << shortest(s.er.beta1) << '\n'
    << "  beta2: " << shortest(s.er.beta2) << '\n'
    << "  beta3: " << shortest(s.er.beta3) << '\n'
    << "  beta4: " << shortest(s.er.beta4) << '\n'
    << "  beta5: " << shortest(s.er.beta5) << '\n'
    << "  beta6: " << shortest(s.er.beta6) << '\n'
    << "  beta8: " << shortest(s.er.beta8) << '\n'
    << "  beta9: " << shortest(s.er.beta9) << '\n'
    << "  sigma_u: " << shortest(s.er.sigma_u) << '\n'
    << "  sigma_nu1: " << shortest(s.er.sigma_nu1) << '\n'
    << "  sigma_nu2: " << shortest(s.er.sigma_nu2) << '\n'
    << "  age_mean: " << shortest(s.er.age_mean) << '\n'
    << "  bmi_mean: " << shortest(s.er.bmi_mean) << '\n'
    << "variability:\n"
    << "  bounds: [" << shortest(s.variability.bound_u) << ", " << shortest(s.variability.bound_nu1)
    << ", " << shortest(s.variability.bound_nu2) << "]\n"
    << "  redraw: " << to_string(s.variability.redraw) << '\n'
    << "population:\n"
    << "  n: " << s.n_persons << '\n'
    << "  age_min: " << s.demographics.age_min << '\n'
    << "  age_max: " << s.demographics.age_max << '\n'
    << "  bmi_median_at_age_min: " << shortest(s.demographics.bmi_median_at_age_min) << '\n'
    << "  bmi_median_slope: " << shortest(s.demographics.bmi_median_slope) << '\n'
    << "  bmi_log_sd: " << shortest(s.demographics.bmi_log_sd) << '\n'
    << "season:\n"
    << "  start: " << format_date(s.season.start()) << '\n'
    << "  end: " << format_date(s.season.end()) << '\n'
    << "scenario:\n"
    << "  zero_ozone: " << (cfg.zero_ozone ? "true" : "false") << '\n';
  if (!cfg.ozone_file.empty()) o << "  ozone_file: \"" << cfg.ozone_file << "\"\n";
  o << "activity:\n"
    << "  indoor_factor: " << shortest(s.activity.indoor_factor) << '\n'
    << "  outdoor_factor: " << shortest(s.activity.outdoor_factor) << '\n'
    << "  ventilation_log_sd: " << shortest(s.activity.ventilation_log_sd) << '\n'
    << "  blocks:\n";
  for (const auto& b : s.activity.blocks) {
    o << "    - {start: \"" << detail::format_clock(b.start_minute) << "\", duration: " << b.duration
      << ", ventilation: " << shortest(b.ventilation) << ", location: " << to_string(b.location)
      << "}\n";
  }
  o << "risk:\n"
    << "  threshold: " << shortest(cfg.risk.threshold) << '\n'
    << "  min_days: " << cfg.risk.min_days << '\n'
    << "seed: " << s.master_seed << '\n'
    << "output:\n"
    << "  dir: \"" << cfg.out_dir << "\"\n";
  return o.str();
}

}  // namespace ozrisk
