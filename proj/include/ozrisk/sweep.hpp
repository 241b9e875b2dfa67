#pragma once

// Sensitivity sweeps over truncation bounds and redraw frequency. Every
// cell reuses the base setup's population and master seed, so cells differ
// only through the bounds and frequency (common random numbers).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "ozrisk/engine.hpp"

namespace ozrisk {

enum class SweptTerm { U, Nu1, Nu2 };

inline std::string_view to_string(SweptTerm t) {
  switch (t) {
    case SweptTerm::U: return "u";
    case SweptTerm::Nu1: return "nu1";
    case SweptTerm::Nu2: return "nu2";
  }
  return "?";
}

inline SweptTerm parse_swept_term(std::string_view s) {
  if (s == "u" || s == "U") return SweptTerm::U;
  if (s == "nu1") return SweptTerm::Nu1;
  if (s == "nu2") return SweptTerm::Nu2;
  throw ConfigError("unknown sweep term '" + std::string(s) + "' (expected u, nu1 or nu2)");
}

/// 0, step, 2*step, ..., hi (inclusive, within rounding).
inline std::vector<double> bound_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw ConfigError("invalid bound grid");
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) g.push_back(lo + i * step);
  return g;
}

struct SweepSpec {
  SimulationSetup base;
  std::vector<SweptTerm> terms;  // one term, or two for a joint grid
  std::vector<double> grid = bound_grid(0.0, 4.0, 0.5);
  std::vector<Redraw> frequencies = {Redraw::Daily, Redraw::Hourly};
  double fixed_bound = 2.0;  // bound for terms not swept
  RiskQuery query;

  void validate() const {
    if (terms.empty() || terms.size() > 2) throw ConfigError("sweep needs one or two terms");
    if (terms.size() == 2 && terms[0] == terms[1]) throw ConfigError("joint sweep terms must differ");
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end())) throw ConfigError("sweep grid must be ascending");
    for (double b : grid) {
      if (std::isnan(b) || b < 0.0) throw ConfigError("sweep bounds must be >= 0");
    }
    if (frequencies.empty()) throw ConfigError("sweep needs at least one frequency");
    if (std::isnan(fixed_bound) || fixed_bound < 0.0) throw ConfigError("fixed bound must be >= 0");
    for (auto t : terms) {
      if (t == SweptTerm::Nu2 && base.er.variant != ErVariant::MSS2013)
        throw ConfigError("nu2 can only be swept with the MSS2013 E-R function");
    }
    query.validate();
  }

  std::string term_label() const {
    std::string s(to_string(terms[0]));
    if (terms.size() == 2) s += "+" + std::string(to_string(terms[1]));
    return s;
  }
};

struct SweepRow {
  std::string term;
  double bound_u = 0.0;
  double bound_nu1 = 0.0;
  double bound_nu2 = 0.0;
  Redraw frequency = Redraw::Daily;
  double risk_pct = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_exceed = 0;
  std::size_t n_total = 0;
  std::uint64_t master_seed = 0;
  std::string error;  // non-empty when the cell failed

  double bound(SweptTerm t) const {
    return t == SweptTerm::U ? bound_u : t == SweptTerm::Nu1 ? bound_nu1 : bound_nu2;
  }
};

struct SweepResult {
  std::vector<SweptTerm> terms;
  std::vector<SweepRow> rows;
};

namespace detail {

inline void set_bound(VariabilityConfig& v, SweptTerm t, double b) {
  switch (t) {
    case SweptTerm::U: v.bound_u = b; break;
    case SweptTerm::Nu1: v.bound_nu1 = b; break;
    case SweptTerm::Nu2: v.bound_nu2 = b; break;
  }
}

}  // namespace detail

/// The variability configuration of every cell, in output order: frequency
/// outermost, then the first term's grid, then the second term's.
inline std::vector<VariabilityConfig> sweep_cells(const SweepSpec& spec) {
  std::vector<VariabilityConfig> cells;
  VariabilityConfig fixed{spec.fixed_bound, spec.fixed_bound, spec.fixed_bound, Redraw::Daily};
  for (Redraw f : spec.frequencies) {
    for (double b0 : spec.grid) {
      if (spec.terms.size() == 1) {
        VariabilityConfig c = fixed;
        c.redraw = f;
        detail::set_bound(c, spec.terms[0], b0);
        cells.push_back(c);
        continue;
      }
      for (double b1 : spec.grid) {
        VariabilityConfig c = fixed;
        c.redraw = f;
        detail::set_bound(c, spec.terms[0], b0);
        detail::set_bound(c, spec.terms[1], b1);
        cells.push_back(c);
      }
    }
  }
  return cells;
}

/// Run every cell. A failing cell is recorded with its error and the sweep
/// continues.
inline SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0) {
  spec.validate();
  SweepResult result{spec.terms, {}};
  for (const auto& cell : sweep_cells(spec)) {
    SweepRow row;
    row.term = spec.term_label();
    row.bound_u = cell.bound_u;
    row.bound_nu1 = cell.bound_nu1;
    row.bound_nu2 = cell.bound_nu2;
    row.frequency = cell.redraw;
    row.master_seed = spec.base.master_seed;
    try {
      SimulationSetup setup = spec.base;
      setup.variability = cell;
      const auto out = run_simulation(setup, threads);
      const auto risk = aggregate_risk(out.results, spec.query);
      row.risk_pct = risk.percent_of_population;
      row.n_exceed = risk.n_exceeding;
      row.n_total = risk.n_total;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

inline constexpr const char* kSweepCsvHeader =
    "term,bound_u_sd,bound_nu1_sd,bound_nu2_sd,frequency,risk_pct,n_exceed,n_total,master_seed";

namespace detail {

inline std::string format_bound(double b) {
  if (std::isinf(b)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", b);
  return buf;
}

}  // namespace detail

inline void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << kSweepCsvHeader << '\n';
  char risk[32];
  for (const auto& r : result.rows) {
    if (r.error.empty()) {
      std::snprintf(risk, sizeof risk, "%.4f", r.risk_pct);
    } else {
      std::snprintf(risk, sizeof risk, "NA");
    }
    os << r.term << ',' << detail::format_bound(r.bound_u) << ',' << detail::format_bound(r.bound_nu1)
       << ',' << detail::format_bound(r.bound_nu2) << ',' << to_string(r.frequency) << ',' << risk
       << ',' << r.n_exceed << ',' << r.n_total << ',' << r.master_seed << '\n';
  }
}

inline void emit_table(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_sweep_csv(out, result);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace ozrisk
