#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "ozrisk/er_model.hpp"
#include "ozrisk/errors.hpp"
#include "ozrisk/random.hpp"

namespace ozrisk {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();
inline constexpr std::uint32_t kMaxRejections = 1'000'000;
inline constexpr double kMinutesPerDay = 1440.0;

enum class Redraw { Daily, Hourly };

inline std::string_view to_string(Redraw r) { return r == Redraw::Daily ? "daily" : "hourly"; }

inline Redraw parse_redraw(std::string_view s) {
  if (s == "daily" || s == "Daily") return Redraw::Daily;
  if (s == "hourly" || s == "Hourly") return Redraw::Hourly;
  throw ConfigError("unknown redraw frequency '" + std::string(s) + "' (expected daily or hourly)");
}

/// Truncation bounds in standard-deviation units. 0 disables a term;
/// infinity disables truncation.
struct VariabilityConfig {
  double bound_u = 2.0;
  double bound_nu1 = 2.0;
  double bound_nu2 = 2.0;
  Redraw redraw = Redraw::Daily;

  void validate() const {
    for (double b : {bound_u, bound_nu1, bound_nu2}) {
      if (std::isnan(b) || b < 0.0) throw ConfigError("variability bounds must be >= 0 (or inf)");
    }
  }
};

struct DrawEpoch {
  std::uint32_t day = 0;
  std::uint32_t hour = 0;  // always 0 under daily redraw

  std::uint32_t id() const noexcept { return day * 24u + hour; }
  friend bool operator==(const DrawEpoch&, const DrawEpoch&) = default;
};

/// Epoch whose noise applies to an event starting `start_minute` minutes into
/// the season. Events straddling an hour boundary use their start hour.
inline DrawEpoch epoch_of(double start_minute, Redraw redraw, std::uint32_t n_days) {
  if (!(start_minute >= 0.0) || !(start_minute < n_days * kMinutesPerDay))
    throw std::out_of_range("event start " + std::to_string(start_minute) +
                            " min is outside the season");
  const auto day = static_cast<std::uint32_t>(start_minute / kMinutesPerDay);
  if (redraw == Redraw::Daily) return {day, 0};
  const double minute_of_day = start_minute - day * kMinutesPerDay;
  return {day, static_cast<std::uint32_t>(minute_of_day / 60.0)};
}

/// Draw from N(0, sigma^2) conditioned on |draw| <= bound_sd * sigma by
/// discarding out-of-bound draws and redrawing.
inline double sample_truncated(RandomStream& stream, double sigma, double bound_sd) {
  if (sigma == 0.0 || bound_sd == 0.0) return 0.0;
  const double limit = bound_sd * sigma;
  for (std::uint32_t attempt = 0; attempt < kMaxRejections; ++attempt) {
    const double draw = sigma * stream.next_normal();
    if (std::abs(draw) <= limit) return draw;
  }
  throw SimulationError("truncated draw rejected " + std::to_string(kMaxRejections) +
                        " times; bound " + std::to_string(bound_sd) + " sd is too narrow");
}

/// The person's sensitivity term U, drawn once and reused all season.
inline double person_u(std::uint64_t master_seed, std::uint64_t person, const ERFunctionSpec& spec,
                       const VariabilityConfig& config) {
  RandomStream stream(master_seed, person, Term::U);
  return sample_truncated(stream, spec.sigma_u, config.bound_u);
}

struct EpochNoise {
  double nu1 = 0.0;
  double nu2 = 0.0;
};

/// Intra-individual noise for one draw epoch. Each (person, term, epoch) has
/// its own stream, so the result depends only on those identifiers.
inline EpochNoise epoch_noise(std::uint64_t master_seed, std::uint64_t person, DrawEpoch epoch,
                              const ERFunctionSpec& spec, const VariabilityConfig& config) {
  EpochNoise noise;
  RandomStream s1(master_seed, person, Term::Nu1, epoch.id());
  noise.nu1 = sample_truncated(s1, spec.sigma_nu1, config.bound_nu1);
  if (spec.variant == ErVariant::MSS2013) {
    RandomStream s2(master_seed, person, Term::Nu2, epoch.id());
    noise.nu2 = sample_truncated(s2, spec.sigma_nu2, config.bound_nu2);
  }
  return noise;
}

}  // namespace ozrisk
