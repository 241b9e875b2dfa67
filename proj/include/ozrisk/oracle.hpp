#pragma once

// Closed-form exceedance probabilities for the zero-ozone case, where the
// only source of decrements is the additive term nu1 ~ N(0, sigma^2)
// truncated at +/- b standard deviations.
//
//   P(no decrement >= x sd in one draw) = (Phi(x) - Phi(-b)) / (Phi(b) - Phi(-b))
//   P(at least one in t draws)          = 1 - P_nd^t
//
// Under MSS2013 the nu2 term is multiplied by the median response, which is
// zero without ozone, so the same formulas apply with sigma = sigma_nu1.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ozrisk::oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double normal_cdf(double z) {
  if (std::isnan(z)) throw std::invalid_argument("normal_cdf: NaN argument");
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// Upper tail 1 - Phi(z), computed without cancellation.
inline double normal_sf(double z) {
  if (std::isnan(z)) throw std::invalid_argument("normal_sf: NaN argument");
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

struct ExceedanceQuery {
  double x_sd = 0.0;   // threshold in sd units
  double b_sd = kInf;  // truncation bound in sd units
  double t = 1.0;      // number of independent draws

  void validate() const {
    if (!(x_sd >= 0.0) || !(b_sd >= 0.0) || !(t >= 0.0) || std::isinf(x_sd) || std::isinf(t))
      throw std::invalid_argument("exceedance query requires x >= 0, b >= 0, finite t >= 0");
  }
};

/// Probability mass of one truncated draw at or above x sd; 0 when b <= x.
inline double p_decrement_single(const ExceedanceQuery& q) {
  q.validate();
  if (q.b_sd <= q.x_sd) return 0.0;
  const double tail = normal_sf(q.x_sd) - normal_sf(q.b_sd);
  const double mass = 1.0 - 2.0 * normal_sf(q.b_sd);
  return tail / mass;
}

inline double p_no_decrement(const ExceedanceQuery& q) {
  q.validate();
  if (q.b_sd <= q.x_sd) return 1.0;
  const double lo = normal_cdf(-q.b_sd);
  const double hi = std::isinf(q.b_sd) ? 1.0 : normal_cdf(q.b_sd);
  return (normal_cdf(q.x_sd) - lo) / (hi - lo);
}

inline double p_at_least_one(const ExceedanceQuery& q) {
  const double p1 = p_decrement_single(q);
  if (q.t == 0.0 || p1 == 0.0) return 0.0;
  return -std::expm1(q.t * std::log1p(-p1));
}

/// Population percentage with at least one nu1 draw >= threshold over `draws`
/// draws (season days for daily redraw, season hours for hourly).
inline double zero_ozone_risk(double threshold_pct, double sigma_nu1, double b_sd, double draws) {
  if (!(sigma_nu1 >= 0.0)) throw std::invalid_argument("sigma_nu1 must be >= 0");
  if (sigma_nu1 == 0.0) {
    if (threshold_pct > 0.0) return 0.0;
    throw std::invalid_argument("zero_ozone_risk: threshold must be > 0");
  }
  return 100.0 * p_at_least_one({threshold_pct / sigma_nu1, b_sd, draws});
}

/// Variance of N(0, sigma^2) conditioned on |draw| <= b sigma.
inline double truncated_normal_variance(double sigma, double b_sd) {
  if (b_sd == 0.0 || sigma == 0.0) return 0.0;
  if (std::isinf(b_sd)) return sigma * sigma;
  const double mass = 1.0 - 2.0 * normal_sf(b_sd);
  return sigma * sigma * (1.0 - 2.0 * b_sd * normal_pdf(b_sd) / mass);
}

}  // namespace ozrisk::oracle
