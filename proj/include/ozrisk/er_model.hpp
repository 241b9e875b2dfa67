#pragma once

// Exposure-response model for ozone-induced FEV1 decrement.
//
// Accumulated dose follows a first-order decay driven by concentration and
// ventilation:
//
//   X(t1) = X(t0) exp(-b5 dt) + (C / b5) V^b6 (1 - exp(-b5 dt))
//
// and the decrement is a sigmoid of the thresholded dose, scaled by a
// person-level multiplier exp(U), plus an additive error term E:
//
//   N    = b1 + b2 (age - mean_age) + b8 (bmi - mean_bmi)
//   M    = N / (1 + b4 exp(-b3 X)) - N / (1 + b4)
//   dFEV1 = exp(U) M + E
//
// E = nu1 for MSS2012 and E = nu1 + nu2 exp(U) M for MSS2013.
// Units: C in ppm, V in L/min/m^2 of body surface area, time in minutes.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ozrisk/errors.hpp"

namespace ozrisk {

enum class ErVariant { MSS2012, MSS2013 };

inline std::string_view to_string(ErVariant v) {
  return v == ErVariant::MSS2012 ? "MSS2012" : "MSS2013";
}

inline ErVariant parse_variant(std::string_view s) {
  if (s == "MSS2012" || s == "mss2012") return ErVariant::MSS2012;
  if (s == "MSS2013" || s == "mss2013") return ErVariant::MSS2013;
  throw ConfigError("unknown E-R variant '" + std::string(s) + "' (expected MSS2012 or MSS2013)");
}

struct ERFunctionSpec {
  ErVariant variant = ErVariant::MSS2012;
  double beta1 = 0.0;  // response plateau intercept, percent
  double beta2 = 0.0;  // age slope, percent per year
  double beta3 = 0.0;  // sigmoid steepness, 1/dose
  double beta4 = 0.0;  // sigmoid offset, dimensionless
  double beta5 = 0.0;  // dose decay, 1/min
  double beta6 = 0.0;  // ventilation exponent
  double beta8 = 0.0;  // BMI slope, percent per kg/m^2
  double beta9 = 0.0;  // dose threshold, dose units
  double sigma_u = 0.0;
  double sigma_nu1 = 0.0;
  double sigma_nu2 = 0.0;  // MSS2013 only
  double age_mean = 0.0;
  double bmi_mean = 0.0;

  void validate() const {
    const std::array<double, 13> all = {beta1, beta2,     beta3,     beta4,    beta5,
                                        beta6, beta8,     beta9,     sigma_u,  sigma_nu1,
                                        sigma_nu2, age_mean, bmi_mean};
    for (double v : all) {
      if (!std::isfinite(v)) throw ConfigError("E-R parameters must be finite");
    }
    if (!(beta5 > 0.0)) throw ConfigError("beta5 (dose decay) must be > 0");
    if (beta9 < 0.0) throw ConfigError("beta9 (dose threshold) must be >= 0");
    if (sigma_u < 0.0 || sigma_nu1 < 0.0 || sigma_nu2 < 0.0)
      throw ConfigError("error-term standard deviations must be >= 0");
    if (variant == ErVariant::MSS2013 && sigma_nu2 == 0.0)
      throw ConfigError("MSS2013 requires sigma_nu2 > 0 (use MSS2012 for a single additive term)");
  }
};

struct DoseState {
  double x = 0.0;  // accumulated dose
  double t = 0.0;  // minutes since season start
};

namespace detail {

inline void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
}

}  // namespace detail

/// Advance the accumulated dose across one event of constant concentration
/// `c` (ppm) and ventilation `v` (L/min/m^2) lasting `dt` minutes.
inline DoseState dose_step(DoseState state, double c, double v, double dt,
                           const ERFunctionSpec& spec) {
  detail::require_finite(state.x, "dose");
  detail::require_finite(c, "concentration");
  detail::require_finite(v, "ventilation");
  detail::require_finite(dt, "duration");
  if (!(dt > 0.0)) throw std::invalid_argument("event duration must be > 0");
  if (c < 0.0 || v < 0.0) throw std::invalid_argument("concentration and ventilation must be >= 0");

  // -expm1 keeps (1 - decay) accurate for short events.
  const double growth = -std::expm1(-spec.beta5 * dt);
  const double decay = 1.0 - growth;
  const double target = c / spec.beta5 * std::pow(v, spec.beta6);
  const double x = state.x * decay + target * growth;
  return {x < 0.0 ? 0.0 : x, state.t + dt};
}

inline double effective_dose(double x, const ERFunctionSpec& spec) {
  const double e = x - spec.beta9;
  return e > 0.0 ? e : 0.0;
}

/// Plateau of the sigmoid for a given person; may be negative for extreme
/// age/BMI combinations, in which case the median response is negative too.
inline double response_scale(double age, double bmi, const ERFunctionSpec& spec) {
  return spec.beta1 + spec.beta2 * (age - spec.age_mean) + spec.beta8 * (bmi - spec.bmi_mean);
}

inline double median_response_scaled(double x_eff, double scale, const ERFunctionSpec& spec) {
  if (x_eff == 0.0 || spec.beta3 == 0.0) return 0.0;
  return scale / (1.0 + spec.beta4 * std::exp(-spec.beta3 * x_eff)) - scale / (1.0 + spec.beta4);
}

/// The bracketed sigmoid term M, in percent FEV1 decrement.
inline double median_response(double x_eff, double age, double bmi, const ERFunctionSpec& spec) {
  return median_response_scaled(x_eff, response_scale(age, bmi, spec), spec);
}

/// Percent decrement in FEV1. Positive values are decrements; negative
/// values (improvements) are kept as is.
inline double dfev1(double m, double u, double nu1, double nu2, const ERFunctionSpec& spec) {
  const double scaled = std::exp(u) * m;
  if (spec.variant == ErVariant::MSS2012) return scaled + nu1;
  return scaled + nu1 + nu2 * scaled;
}

}  // namespace ozrisk
