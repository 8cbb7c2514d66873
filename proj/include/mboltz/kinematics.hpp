#pragma once

// Binary-collision kinematics for massless particles.
//
// With nu = |p| + |q| and n = p + q the relative momentum satisfies
// rho^2 = 2(|p||q| - p.q) = nu^2 - |n|^2, and a unit vector omega selects the
// outgoing pair
//
//   p' = n/2 + (rho/2) omega + (n.omega) n / (2 (nu + rho)),   q' = n - p',
//
// which conserves |p| + |q| and rho. The physical h = sqrt(s) equals rho / R,
// so nothing downstream stores h or s separately.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "mboltz/error.hpp"
#include "mboltz/vec3.hpp"

namespace mboltz {

struct CollisionPair {
  MomentumVector p;
  MomentumVector q;
  double rho = 0.0;  // relative momentum
  double nu = 0.0;   // |p| + |q|
  MomentumVector n;  // p + q
};

inline double rho(const MomentumVector& p, const MomentumVector& q) {
  const double s = 2.0 * (norm(p) * norm(q) - dot(p, q));
  return std::sqrt(std::max(0.0, s));
}

inline CollisionPair make_collision_pair(const MomentumVector& p, const MomentumVector& q) {
  return {p, q, rho(p, q), norm(p) + norm(q), p + q};
}

namespace detail {

// Hot-path form; the caller guarantees |omega| = 1.
inline MomentumVector post_collision_p(const MomentumVector& n, double nu, double rho_pq,
                                       const MomentumVector& omega) {
  const double denom = 2.0 * (nu + rho_pq);
  if (denom == 0.0) return {};
  return 0.5 * n + (0.5 * rho_pq) * omega + (dot(n, omega) / denom) * n;
}

}  // namespace detail

/// Outgoing momenta (p', q') for the scattering direction `omega`.
inline std::pair<MomentumVector, MomentumVector> post_collision(const MomentumVector& p,
                                                                const MomentumVector& q,
                                                                const MomentumVector& omega) {
  if (!(std::abs(norm(omega) - 1.0) <= 1e-12)) {
    throw std::invalid_argument("post_collision: omega must be a unit vector");
  }
  const CollisionPair c = make_collision_pair(p, q);
  const MomentumVector pp = detail::post_collision_p(c.n, c.nu, c.rho, omega);
  return {pp, c.n - pp};
}

/// |p'| from the energy split, (nu + n.omega) / 2.
inline double post_collision_modulus(const MomentumVector& p, const MomentumVector& q,
                                     const MomentumVector& omega) {
  return 0.5 * (norm(p) + norm(q) + dot(p + q, omega));
}

namespace detail {

inline void require_nondegenerate(const CollisionPair& c, bool need_n, const char* who) {
  if (!(c.rho > 0.0)) {
    throw DegenerateConfiguration(std::string(who) + ": rho = 0 (parallel momenta)");
  }
  if (need_n && !(norm(c.n) > 0.0)) {
    throw DegenerateConfiguration(std::string(who) + ": p + q = 0");
  }
}

}  // namespace detail

// Exact S^2 integrals over omega.

namespace detail {

// ln((nu + |n|) / rho); atanh(|n|/nu) is the same number and avoids the
// 0/0-like ratio when |n| << nu.
inline double log_ratio(const CollisionPair& c, double n_abs) {
  const double x = n_abs / c.nu;
  return x < 0.5 ? std::atanh(x) : std::log((c.nu + n_abs) / c.rho);
}

}  // namespace detail

/// Integral over the unit sphere of 1/|p'| d omega = (8 pi / |n|) ln((nu + |n|) / rho).
inline double angular_integral_inv_p(const MomentumVector& p, const MomentumVector& q) {
  const CollisionPair c = make_collision_pair(p, q);
  detail::require_nondegenerate(c, true, "angular_integral_inv_p");
  const double n_abs = norm(c.n);
  return 8.0 * std::numbers::pi / n_abs * detail::log_ratio(c, n_abs);
}

/// Integral over the unit sphere of 1/|p'|^2 d omega = 16 pi / rho^2.
inline double angular_integral_inv_p2(const MomentumVector& p, const MomentumVector& q) {
  const CollisionPair c = make_collision_pair(p, q);
  detail::require_nondegenerate(c, false, "angular_integral_inv_p2");
  return 16.0 * std::numbers::pi / (c.rho * c.rho);
}

/// Integral over the unit sphere of 1/(|p'||q'|) d omega = (16 pi / (nu |n|)) ln((nu + |n|) / rho).
inline double angular_integral_inv_pq(const MomentumVector& p, const MomentumVector& q) {
  const CollisionPair c = make_collision_pair(p, q);
  detail::require_nondegenerate(c, true, "angular_integral_inv_pq");
  const double n_abs = norm(c.n);
  return 16.0 * std::numbers::pi / (c.nu * n_abs) * detail::log_ratio(c, n_abs);
}

}  // namespace mboltz
