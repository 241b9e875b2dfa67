// ozrisk: command-line front end.
//
//   ozrisk simulate     --config run.yaml [--seed N] [--threads N] [--out-dir DIR]
//   ozrisk sweep        --config run.yaml --term nu1 [--grid 0:4:0.5] [--frequencies daily,hourly]
//   ozrisk oracle       --sigma 4.13 --bound inf --threshold 10 --draws 275
//   ozrisk gen-scenario --season 2017-03-01:2017-11-30 [--zero-ozone | --constant PPB]
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ozrisk/ozrisk.hpp"

namespace fs = std::filesystem;
using namespace ozrisk;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& s, const char* what) {
  if (s == "inf" || s == "infinity" || s == "unbounded") return oracle::kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("invalid ") + what + " '" + s + "'");
  }
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_number(item, what));
  if (out.empty()) throw ConfigError(std::string("empty ") + what + " list");
  return out;
}

/// "lo:hi:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() == 3)
    return bound_grid(parse_number(parts[0], "grid"), parse_number(parts[1], "grid"),
                      parse_number(parts[2], "grid"));
  return parse_list(s, "grid");
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string fmt(double v, int decimals = 2) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string out_dir;
};

RunConfig load_run_config(const CommonOptions& opts) {
  RunConfig cfg = parse_config(opts.config_path);
  if (opts.seed) cfg.setup.master_seed = *opts.seed;
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  load_scenario(cfg);
  return cfg;
}

int cmd_simulate(const CommonOptions& opts) {
  RunConfig cfg = load_run_config(opts);
  const auto started = std::chrono::steady_clock::now();
  const auto out = run_simulation(cfg.setup, opts.threads);
  const auto risk = aggregate_risk(out.results, cfg.risk);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  {
    std::ofstream persons(dir / "persons.jsonl", std::ios::binary);
    if (!persons) throw std::runtime_error("cannot write persons.jsonl in " + dir.string());
    write_person_records(persons, out.results, cfg.risk);
  }
  write_file(dir / "config_resolved.yaml", echo_config(cfg));

  nlohmann::ordered_json summary;
  summary["risk_pct"] = risk.percent_of_population;
  summary["n_exceeding"] = risk.n_exceeding;
  summary["n_total"] = risk.n_total;
  summary["standard_error_pct"] = risk.standard_error_pct();
  summary["threshold_pct"] = cfg.risk.threshold;
  summary["min_days"] = cfg.risk.min_days;
  summary["variant"] = std::string(to_string(cfg.setup.er.variant));
  summary["redraw"] = std::string(to_string(cfg.setup.variability.redraw));
  summary["bounds_sd"] = {detail::shortest(cfg.setup.variability.bound_u),
                          detail::shortest(cfg.setup.variability.bound_nu1),
                          detail::shortest(cfg.setup.variability.bound_nu2)};
  summary["zero_ozone"] = cfg.zero_ozone;
  summary["season"] = cfg.setup.season.to_string();
  summary["master_seed"] = cfg.setup.master_seed;
  summary["negative_scale_persons"] = out.negative_scale_persons;
  if (cfg.zero_ozone && cfg.risk.min_days == 1) {
    const double draws = cfg.setup.variability.redraw == Redraw::Daily ? cfg.setup.season.n_days()
                                                                       : cfg.setup.season.n_hours();
    summary["oracle_risk_pct"] = oracle::zero_ozone_risk(
        cfg.risk.threshold, cfg.setup.er.sigma_nu1, cfg.setup.variability.bound_nu1, draws);
  }
  summary["config_file"] = "config_resolved.yaml";
  write_file(dir / "summary.json", summary.dump(2) + "\n");

  std::cout << "population risk (dFEV1 >= " << fmt(cfg.risk.threshold, 1) << "% on >= "
            << cfg.risk.min_days << " day(s)): " << fmt(risk.percent_of_population) << "%  ("
            << risk.n_exceeding << " / " << risk.n_total << ", se " << fmt(risk.standard_error_pct())
            << ")\n";
  if (summary.contains("oracle_risk_pct"))
    std::cout << "zero-ozone closed form: " << fmt(summary["oracle_risk_pct"].get<double>()) << "%\n";
  if (out.negative_scale_persons > 0)
    std::cout << "note: " << out.negative_scale_persons
              << " persons have a negative response plateau\n";
  std::cout << "wrote " << (dir / "summary.json").string() << " and persons.jsonl (" << fmt(seconds, 1)
            << " s)\n";
  return 0;
}

struct SweepOptions {
  std::string terms = "nu1";
  std::string grid = "0:4:0.5";
  std::string frequencies = "daily,hourly";
  double fixed_bound = 2.0;
  bool chart = true;
};

int cmd_sweep(const CommonOptions& opts, const SweepOptions& so) {
  RunConfig cfg = load_run_config(opts);
  SweepSpec spec;
  spec.base = cfg.setup;
  spec.query = cfg.risk;
  for (const auto& t : split(so.terms, ',')) spec.terms.push_back(parse_swept_term(t));
  spec.grid = parse_grid(so.grid);
  spec.frequencies.clear();
  for (const auto& f : split(so.frequencies, ',')) spec.frequencies.push_back(parse_redraw(f));
  spec.fixed_bound = so.fixed_bound;
  spec.validate();

  const auto result = run_sweep(spec, opts.threads);

  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  std::string label = spec.term_label();
  for (auto& c : label) c = c == '+' ? '_' : c;
  const fs::path table = dir / ("sweep_" + label + ".csv");
  emit_table(result, table.string());
  write_file(dir / ("sweep_" + label + "_config.yaml"), echo_config(cfg));

  std::cout << "term " << spec.term_label() << " (" << to_string(cfg.setup.er.variant) << ")\n";
  std::cout << "  bound_u  bound_nu1  bound_nu2  freq     risk%\n";
  int failures = 0;
  for (const auto& r : result.rows) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-7s  %-9s  %-9s  %-7s  %s\n", fmt(r.bound_u, 1).c_str(),
                  fmt(r.bound_nu1, 1).c_str(), fmt(r.bound_nu2, 1).c_str(),
                  std::string(to_string(r.frequency)).c_str(),
                  r.error.empty() ? fmt(r.risk_pct).c_str() : "FAILED");
    std::cout << line;
    if (!r.error.empty()) {
      ++failures;
      std::cerr << "cell failed: " << r.error << "\n";
    }
  }
  std::cout << "wrote " << table.string() << "\n";
  if (so.chart && spec.terms.size() == 1) {
    const fs::path svg = dir / ("sweep_" + label + ".svg");
    emit_chart(result, svg.string());
    std::cout << "wrote " << svg.string() << "\n";
  }
  return failures == 0 ? 0 : kExitRuntime;
}

struct OracleOptions {
  std::string sigma = "4.13";
  std::string bound = "inf";
  std::string threshold = "10";
  std::string draws = "275";
  std::string out_dir = "out";
};

int cmd_oracle(const OracleOptions& oo) {
  const auto sigmas = parse_list(oo.sigma, "sigma");
  const auto bounds = parse_list(oo.bound, "bound");
  const auto thresholds = parse_list(oo.threshold, "threshold");
  const auto draws = parse_list(oo.draws, "draws");
  for (double s : sigmas)
    if (!(s >= 0.0) || std::isinf(s)) throw ConfigError("sigma must be finite and >= 0");
  for (double b : bounds)
    if (!(b >= 0.0)) throw ConfigError("bound must be >= 0");
  for (double t : thresholds)
    if (!(t > 0.0) || std::isinf(t)) throw ConfigError("threshold must be finite and > 0");
  for (double d : draws)
    if (!(d >= 0.0) || std::isinf(d)) throw ConfigError("draws must be finite and >= 0");

  std::ostringstream csv;
  csv << "sigma,bound_sd,threshold_pct,draws,x_sd,p_no_decrement,risk_pct\n";
  std::cout << "  sigma  bound   threshold  draws    x_sd    P_nd            risk%\n";
  for (double s : sigmas)
    for (double b : bounds)
      for (double th : thresholds)
        for (double t : draws) {
          const double x = s > 0.0 ? th / s : oracle::kInf;
          const double pnd = s > 0.0 ? oracle::p_no_decrement({x, b, t}) : 1.0;
          const double risk = oracle::zero_ozone_risk(th, s, b, t);
          char line[200];
          std::snprintf(line, sizeof line, "  %-5s  %-6s  %-9s  %-7s  %-6s  %.12f  %.4f\n",
                        fmt(s, 2).c_str(), fmt(b, 2).c_str(), fmt(th, 2).c_str(),
                        fmt(t, 0).c_str(), fmt(x, 4).c_str(), pnd, risk);
          std::cout << line;
          std::snprintf(line, sizeof line, "%s,%s,%s,%s,%.10g,%.15g,%.10f\n",
                        detail::shortest(s).c_str(), detail::shortest(b).c_str(),
                        detail::shortest(th).c_str(), detail::shortest(t).c_str(), x, pnd, risk);
          csv << line;
        }
  fs::create_directories(oo.out_dir);
  const fs::path path = fs::path(oo.out_dir) / "oracle.csv";
  write_file(path, csv.str());
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

struct GenOptions {
  std::string season = "2017-03-01:2017-11-30";
  bool zero_ozone = false;
  std::optional<double> constant_ppb;
  std::uint64_t seed = 2017;
  SyntheticOzoneParams synthetic;
  std::string out;
  std::string out_dir = "out";
};

int cmd_gen_scenario(const GenOptions& go) {
  const Season season = Season::parse(go.season);
  OzoneSeries series;
  std::string kind;
  if (go.zero_ozone) {
    series = zero_ozone_series(season);
    kind = "zero";
  } else if (go.constant_ppb) {
    if (!(*go.constant_ppb >= 0.0) || std::isinf(*go.constant_ppb))
      throw ConfigError("--constant must be finite and >= 0");
    series = constant_ozone_series(season, *go.constant_ppb);
    kind = "constant";
  } else {
    series = synthetic_ozone_series(season, go.synthetic, go.seed);
    kind = "synthetic";
  }
  fs::path path = go.out;
  if (path.empty()) {
    fs::create_directories(go.out_dir);
    path = fs::path(go.out_dir) / ("ozone_" + kind + ".csv");
  } else if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ostringstream csv;
  write_ozone_csv(csv, series, season);
  write_file(path, csv.str());

  double peak = 0.0, sum = 0.0;
  for (double v : series.ppb) {
    peak = std::max(peak, v);
    sum += v;
  }
  std::cout << kind << " ozone series for " << season.to_string() << ": " << series.ppb.size()
            << " hours (" << season.n_days() << " days), mean " << fmt(sum / series.ppb.size(), 1)
            << " ppb, max " << fmt(peak, 1) << " ppb\nwrote " << path.string() << "\n";
  return 0;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Run configuration (YAML)")->required();
  cmd->add_option("--seed", opts.seed, "Override the master seed");
  cmd->add_option("--threads", opts.threads,
                  "Worker threads (default: $OZRISK_THREADS or hardware concurrency)");
  cmd->add_option("--out-dir", opts.out_dir, "Output directory (overrides output.dir)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Population ozone lung-function risk microsimulation"};
  app.require_subcommand(1);

  CommonOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "Run one scenario and report population risk");
  add_common(simulate, sim_opts);

  CommonOptions sweep_common;
  SweepOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Sweep error-term bounds and redraw frequency");
  add_common(sweep, sweep_common);
  sweep->add_option("--term", sweep_opts.terms, "Term(s) to sweep: u, nu1, nu2 or nu1,nu2")
      ->capture_default_str();
  sweep->add_option("--grid", sweep_opts.grid, "Bounds in sd: lo:hi:step or a,b,c")
      ->capture_default_str();
  sweep->add_option("--frequencies", sweep_opts.frequencies, "daily, hourly or daily,hourly")
      ->capture_default_str();
  sweep->add_option("--fixed-bound", sweep_opts.fixed_bound, "Bound for terms not swept")
      ->capture_default_str();
  sweep->add_flag("!--no-chart", sweep_opts.chart, "Skip the SVG chart");

  OracleOptions oracle_opts;
  auto* oracle_cmd = app.add_subcommand("oracle", "Closed-form zero-ozone exceedance risk");
  oracle_cmd->add_option("--sigma", oracle_opts.sigma, "sd of nu1 (comma list)")->capture_default_str();
  oracle_cmd->add_option("--bound", oracle_opts.bound, "Bound in sd, or inf (comma list)")
      ->capture_default_str();
  oracle_cmd->add_option("--threshold", oracle_opts.threshold, "Decrement threshold % (comma list)")
      ->capture_default_str();
  oracle_cmd->add_option("--draws", oracle_opts.draws, "Number of draws (comma list)")
      ->capture_default_str();
  oracle_cmd->add_option("--out-dir", oracle_opts.out_dir, "Directory for oracle.csv")
      ->capture_default_str();

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen-scenario", "Write an hourly ozone CSV for a season");
  gen->add_option("--season", gen_opts.season, "START:END dates")->capture_default_str();
  auto* zero_flag = gen->add_flag("--zero-ozone", gen_opts.zero_ozone, "All-zero series");
  gen->add_option("--constant", gen_opts.constant_ppb, "Constant series at this ppb")
      ->excludes(zero_flag);
  gen->add_option("--seed", gen_opts.seed, "Seed for the synthetic series")->capture_default_str();
  gen->add_option("--summer-peak", gen_opts.synthetic.summer_peak_ppb, "Mid-season afternoon peak, ppb")
      ->capture_default_str();
  gen->add_option("--shoulder-peak", gen_opts.synthetic.shoulder_peak_ppb,
                  "Afternoon peak at season edges, ppb")
      ->capture_default_str();
  gen->add_option("--night", gen_opts.synthetic.night_ppb, "Night-time level, ppb")
      ->capture_default_str();
  gen->add_option("--daily-log-sd", gen_opts.synthetic.daily_log_sd, "Day-to-day lognormal sd")
      ->capture_default_str();
  gen->add_option("--out", gen_opts.out, "Output CSV path");
  gen->add_option("--out-dir", gen_opts.out_dir, "Directory used when --out is not given")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(sim_opts);
    if (*sweep) return cmd_sweep(sweep_common, sweep_opts);
    if (*oracle_cmd) return cmd_oracle(oracle_opts);
    if (*gen) return cmd_gen_scenario(gen_opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
