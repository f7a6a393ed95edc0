#pragma once

#include "hkpr/error.hpp"
#include "hkpr/rng.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace hkpr {

/// p_k = e^{-t} t^k / k! for k = 0..k_max, accumulated in log space so
/// large t neither overflows t^k nor underflows e^{-t} prematurely.
inline std::vector<double> poisson_weights(double t, std::size_t k_max) {
  if (!(t >= 0.0)) throw InvalidArgument("Poisson rate must be nonnegative, got " + std::to_string(t));
  std::vector<double> weights(k_max + 1, 0.0);
  if (t == 0.0) {
    weights[0] = 1.0;
    return weights;
  }
  const double log_t = std::log(t);
  double log_p = -t;
  weights[0] = std::exp(log_p);
  for (std::size_t k = 1; k <= k_max; ++k) {
    log_p += log_t - std::log(static_cast<double>(k));
    weights[k] = std::exp(log_p);
  }
  return weights;
}

/// Smallest N such that the Poisson(t) tail beyond N is certified below
/// `tol`. Once k + 2 > t the tail after k is dominated by a geometric series
/// with ratio t/(k+2), which gives the certificate.
inline std::size_t poisson_truncation(double t, double tol) {
  if (!(t >= 0.0)) throw InvalidArgument("Poisson rate must be nonnegative, got " + std::to_string(t));
  if (!(tol > 0.0)) throw InvalidArgument("truncation tolerance must be positive");
  if (t == 0.0) return 0;
  const double log_t = std::log(t);
  double log_p = -t; // log p_k
  for (std::size_t k = 0;; ++k) {
    const double log_next = log_p + log_t - std::log(static_cast<double>(k + 1)); // log p_{k+1}
    const double ratio = t / static_cast<double>(k + 2);
    if (ratio < 1.0) {
      const double tail_bound = std::exp(log_next) / (1.0 - ratio);
      if (tail_bound < tol) return k;
    }
    log_p = log_next;
  }
}

namespace detail {

// Inversion by sequential search of the cumulative sum. Exact up to double
// rounding of the cdf; a draw beyond the representable cdf is retried.
template <typename Gen>
std::uint64_t poisson_inversion(double t, Gen& gen) {
  const double p0 = std::exp(-t);
  for (;;) {
    const double u = uniform01(gen);
    double p = p0;
    double cdf = p0;
    std::uint64_t k = 0;
    while (u >= cdf) {
      ++k;
      p *= t / static_cast<double>(k);
      cdf += p;
      if (p == 0.0 && cdf <= u) break; // rounding left u beyond the cdf
    }
    if (u < cdf) return k;
  }
}

// Hörmann's transformed rejection with squeeze (PTRS). Exact for every
// rate; the acceptance test compares against the true log-pmf.
template <typename Gen>
std::uint64_t poisson_ptrs(double t, Gen& gen) {
  const double log_t = std::log(t);
  const double b = 0.931 + 2.53 * std::sqrt(t);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);

  for (;;) {
    const double u = uniform01(gen) - 0.5;
    const double v = uniform01(gen);
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + t + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = -t + k * log_t - std::lgamma(k + 1.0);
    if (lhs <= rhs) return static_cast<std::uint64_t>(k);
  }
}

} // namespace detail

/// Rate above which the rejection sampler replaces inversion.
inline constexpr double kPoissonInversionLimit = 30.0;

/// Draws k ~ Poisson(t). Inversion for t <= 30, transformed rejection above.
template <typename Gen>
std::uint64_t sample_walk_length(double t, Gen& gen) {
  if (!(t >= 0.0)) throw InvalidArgument("Poisson rate must be nonnegative, got " + std::to_string(t));
  if (t == 0.0) return 0;
  if (t <= kPoissonInversionLimit) return detail::poisson_inversion(t, gen);
  return detail::poisson_ptrs(t, gen);
}

} // namespace hkpr
