#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "ozrisk/er_model.hpp"
#include "ozrisk/errors.hpp"
#include "ozrisk/population.hpp"
#include "ozrisk/season.hpp"
#include "ozrisk/variability.hpp"

namespace ozrisk {

struct SeasonResult {
  std::uint64_t person_id = 0;
  double u = 0.0;
  bool negative_scale = false;  // sigmoid plateau N < 0 for this person
  std::vector<double> daily_max_dfev1;

  std::uint32_t days_at_or_above(double threshold) const {
    return static_cast<std::uint32_t>(
        std::count_if(daily_max_dfev1.begin(), daily_max_dfev1.end(),
                      [threshold](double v) { return v >= threshold; }));
  }

  double season_max() const {
    return daily_max_dfev1.empty()
               ? 0.0
               : *std::max_element(daily_max_dfev1.begin(), daily_max_dfev1.end());
  }
};

struct RiskQuery {
  double threshold = 10.0;  // percent decrement
  std::uint32_t min_days = 1;

  void validate() const {
    if (!(threshold > 0.0) || !std::isfinite(threshold))
      throw ConfigError("risk threshold must be > 0");
    if (min_days < 1) throw ConfigError("risk min_days must be >= 1");
  }
};

struct RiskEstimate {
  double percent_of_population = 0.0;
  std::size_t n_exceeding = 0;
  std::size_t n_total = 0;

  /// Binomial standard error of the percentage.
  double standard_error_pct() const {
    if (n_total == 0) return 0.0;
    const double p = static_cast<double>(n_exceeding) / n_total;
    return 100.0 * std::sqrt(p * (1.0 - p) / n_total);
  }
};

/// Percentage of persons with at least `min_days` days whose maximum
/// decrement reached the threshold.
inline RiskEstimate aggregate_risk(std::span<const SeasonResult> results, const RiskQuery& query) {
  query.validate();
  if (results.empty()) throw std::invalid_argument("aggregate_risk: no results");
  std::size_t hits = 0;
  for (const auto& r : results) {
    if (r.days_at_or_above(query.threshold) >= query.min_days) ++hits;
  }
  return {100.0 * static_cast<double>(hits) / static_cast<double>(results.size()), hits,
          results.size()};
}

namespace detail {

/// Memoizes exp(-b5 dt) for whole-minute durations and V^b6 for the few
/// distinct ventilation values a templated timeline produces.
class DoseKernel {
 public:
  explicit DoseKernel(const ERFunctionSpec& spec) : spec_(spec) {
    for (int m = 1; m <= 60; ++m) growth_[m] = -std::expm1(-spec.beta5 * m);
  }

  double step(double x, double c, double v, double dt) {
    double growth;
    const int whole = static_cast<int>(dt);
    if (whole == dt && whole >= 1 && whole <= 60) {
      growth = growth_[whole];
    } else {
      growth = -std::expm1(-spec_.beta5 * dt);
    }
    const double target = c == 0.0 ? 0.0 : c / spec_.beta5 * vpow(v);
    const double next = x * (1.0 - growth) + target * growth;
    return next < 0.0 ? 0.0 : next;
  }

 private:
  double vpow(double v) {
    for (std::size_t i = 0; i < n_cached_; ++i) {
      if (cache_v_[i] == v) return cache_p_[i];
    }
    const double p = std::pow(v, spec_.beta6);
    if (n_cached_ < cache_v_.size()) {
      cache_v_[n_cached_] = v;
      cache_p_[n_cached_] = p;
      ++n_cached_;
    }
    return p;
  }

  const ERFunctionSpec& spec_;
  std::array<double, 61> growth_{};
  std::array<double, 48> cache_v_{};
  std::array<double, 48> cache_p_{};
  std::size_t n_cached_ = 0;
};

}  // namespace detail

/// Run one person's season. Events must be time-ordered and tile the
/// season. For each event: advance the dose to the event end, evaluate the
/// decrement with the noise of the event's start epoch, and keep the
/// maximum per calendar day of the event start. `person.u` must already be
/// drawn.
inline SeasonResult simulate_person(const Person& person, std::span<const EventRecord> timeline,
                                    const ERFunctionSpec& spec, const VariabilityConfig& config,
                                    std::uint64_t master_seed, std::uint32_t n_days) {
  SeasonResult result;
  result.person_id = person.id;
  result.u = person.u;
  result.daily_max_dfev1.assign(n_days, -std::numeric_limits<double>::infinity());

  const double scale = response_scale(person.age, person.bmi, spec);
  result.negative_scale = scale < 0.0;

  detail::DoseKernel kernel(spec);
  double dose = 0.0;
  double expected_start = 0.0;
  std::uint32_t current_epoch = UINT32_MAX;
  EpochNoise noise;

  for (const auto& ev : timeline) {
    if (ev.start != expected_start || !(ev.duration > 0.0))
      throw SimulationError("person " + std::to_string(person.id) +
                            ": timeline gap or overlap at minute " + std::to_string(ev.start));
    expected_start = ev.start + ev.duration;

    const DrawEpoch epoch = epoch_of(ev.start, config.redraw, n_days);
    if (epoch.id() != current_epoch) {
      noise = epoch_noise(master_seed, person.id, epoch, spec, config);
      current_epoch = epoch.id();
    }
    dose = kernel.step(dose, ev.concentration, ev.ventilation, ev.duration);
    const double m = median_response_scaled(effective_dose(dose, spec), scale, spec);
    const double value = dfev1(m, person.u, noise.nu1, noise.nu2, spec);
    double& slot = result.daily_max_dfev1[epoch.day];
    if (value > slot) slot = value;
  }
  if (expected_start != n_days * kMinutesPerDay)
    throw SimulationError("person " + std::to_string(person.id) +
                          ": timeline does not cover the season");
  return result;
}

/// Everything a run needs besides the thread count.
struct SimulationSetup {
  ERFunctionSpec er;
  VariabilityConfig variability;
  DemographicsConfig demographics;
  ActivityTemplate activity = default_activity_template();
  Season season = Season::ozone_season(2017);
  Scenario scenario;
  std::size_t n_persons = 0;
  std::uint64_t master_seed = 0;

  /// The E-R spec actually used: slope forced to zero in zero-ozone mode.
  ERFunctionSpec effective_er() const {
    ERFunctionSpec e = er;
    if (scenario.beta3_zero) e.beta3 = 0.0;
    return e;
  }

  void validate() const {
    er.validate();
    variability.validate();
    demographics.validate();
    activity.validate();
    scenario.ozone.validate(season);
    if (n_persons == 0) throw ConfigError("population size must be > 0");
  }
};

struct SimulationOutput {
  std::vector<SeasonResult> results;  // ordered by person id
  std::size_t negative_scale_persons = 0;
};

/// Worker count: explicit value if nonzero, else $OZRISK_THREADS, else the
/// hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("OZRISK_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Simulate every person. Persons are independent and their random streams
/// are keyed by id, so the output is identical for any thread count.
inline SimulationOutput run_simulation(const SimulationSetup& setup, unsigned threads = 0) {
  setup.validate();
  const ERFunctionSpec spec = setup.effective_er();
  const std::size_t n = setup.n_persons;
  SimulationOutput out;
  out.results.resize(n);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::vector<std::string> errors;
  std::size_t n_failed = 0;
  constexpr std::size_t kChunk = 32;

  auto worker = [&] {
    std::vector<EventRecord> timeline;
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= n) break;
      const std::size_t end = std::min(n, begin + kChunk);
      for (std::size_t i = begin; i < end; ++i) {
        try {
          Person person = make_person(i, setup.demographics, setup.master_seed);
          person.u = person_u(setup.master_seed, person.id, spec, setup.variability);
          generate_timeline(person, setup.activity, setup.season, setup.scenario.ozone,
                            setup.master_seed, timeline);
          out.results[i] = simulate_person(person, timeline, spec, setup.variability,
                                           setup.master_seed, setup.season.n_days());
        } catch (const std::exception& e) {
          std::lock_guard lock(error_mutex);
          ++n_failed;
          if (errors.size() < 5) errors.push_back("person " + std::to_string(i) + ": " + e.what());
        }
      }
    }
  };

  const unsigned n_threads = std::max(1u, std::min<unsigned>(resolve_threads(threads),
                                                             static_cast<unsigned>(n)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  if (n_failed > 0) {
    std::string msg = std::to_string(n_failed) + " of " + std::to_string(n) + " persons failed";
    for (const auto& e : errors) msg += "\n  " + e;
    throw SimulationError(msg);
  }
  for (const auto& r : out.results) out.negative_scale_persons += r.negative_scale ? 1 : 0;
  return out;
}

/// One JSON object per line: person id, exceedance-day count, season max.
inline void write_person_records(std::ostream& os, std::span<const SeasonResult> results,
                                 const RiskQuery& query) {
  char buf[160];
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "{\"person\":%llu,\"exceed_days\":%u,\"max_dfev1\":%.6f}\n",
                  static_cast<unsigned long long>(r.person_id), r.days_at_or_above(query.threshold),
                  r.season_max());
    os << buf;
  }
}

}  // namespace ozrisk
