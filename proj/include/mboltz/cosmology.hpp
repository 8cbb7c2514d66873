#pragma once

// FLRW background with scale factor R(t) = C (t + t0)^{1/2}. Data sit at t = 0,
// the initial singularity at t = -t0.

#include <cmath>
#include <limits>
#include <algorithm>
#include <stdexcept>
#include <string>

#include "mboltz/kernel.hpp"

namespace mboltz {

struct CosmologyParams {
  double C = 1.0;
  double t0 = 1.0;

  void validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("cosmology: C must be > 0");
    if (!(t0 > 0.0) || !std::isfinite(t0)) throw std::invalid_argument("cosmology: t0 must be > 0");
  }

  friend bool operator==(const CosmologyParams&, const CosmologyParams&) = default;
};

namespace detail {

inline void require_nonnegative_time(double t, const char* who) {
  if (!(t >= 0.0)) throw std::invalid_argument(std::string(who) + ": t must be >= 0");
}

}  // namespace detail

inline double scale_factor(const CosmologyParams& c, double t) {
  detail::require_nonnegative_time(t, "scale_factor");
  return c.C * std::sqrt(t + c.t0);
}

/// R(t)^{-3+b} (soft) or R(t)^{-3-a} (hard).
inline double prefactor(const CosmologyParams& c, const KernelSpec& kernel, double t) {
  detail::require_nonnegative_time(t, "prefactor");
  const double gamma = kernel.scale_power();
  return std::pow(c.C, gamma) * std::pow(t + c.t0, 0.5 * gamma);
}

namespace detail {

// Antiderivative F(s) = C^g (s + t0)^{beta} / beta with beta = g/2 + 1 < 0, so F(inf) = 0.
inline double prefactor_antiderivative(const CosmologyParams& c, double gamma, double s) {
  const double beta = 0.5 * gamma + 1.0;
  if (std::isinf(s)) return 0.0;
  return std::pow(c.C, gamma) * std::pow(s + c.t0, beta) / beta;
}

}  // namespace detail

/// Exact integral of the prefactor over [t1, t2]; t2 may be +infinity.
inline double prefactor_integral(const CosmologyParams& c, const KernelSpec& kernel, double t1,
                                 double t2) {
  detail::require_nonnegative_time(t1, "prefactor_integral");
  if (!(t1 <= t2)) throw std::invalid_argument("prefactor_integral: requires t1 <= t2");
  if (t1 == t2) return 0.0;
  const double gamma = kernel.scale_power();
  return detail::prefactor_antiderivative(c, gamma, t2) -
         detail::prefactor_antiderivative(c, gamma, t1);
}

/// Largest dt with prefactor_integral(t, t + dt) <= budget; +infinity when the
/// remaining integral to t = infinity is already within budget.
inline double prefactor_horizon(const CosmologyParams& c, const KernelSpec& kernel, double t,
                                double budget) {
  detail::require_nonnegative_time(t, "prefactor_horizon");
  if (!(budget >= 0.0)) throw std::invalid_argument("prefactor_horizon: budget must be >= 0");
  const double gamma = kernel.scale_power();
  const double beta = 0.5 * gamma + 1.0;
  // (t + dt + t0)^beta = (t + t0)^beta + beta * budget / C^gamma
  const double s = t + c.t0;
  const double x = beta * budget / (std::pow(c.C, gamma) * std::pow(s, beta));
  if (!(x > -1.0)) return std::numeric_limits<double>::infinity();
  return std::max(0.0, s * std::expm1(std::log1p(x) / beta));
}

}  // namespace mboltz
