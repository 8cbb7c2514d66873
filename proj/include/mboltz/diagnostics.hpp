#pragma once

// Verification suites: randomized kinematics checks, the cutoff-removal study
// and the symmetry checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "mboltz/collision.hpp"
#include "mboltz/config.hpp"
#include "mboltz/kinematics.hpp"
#include "mboltz/numeric.hpp"
#include "mboltz/quadrature.hpp"
#include "mboltz/run.hpp"
#include "mboltz/solver.hpp"
#include "mboltz/state.hpp"

namespace mboltz {

/// splitmix64 step; used to derive independent stream seeds from one seed.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Generator for stream `stream` of the run seeded with `seed`.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed;
  std::uint64_t s = splitmix64(x);
  for (std::uint64_t i = 0; i < stream; ++i) s = splitmix64(x);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), a(0.0, 2.0 * std::numbers::pi);
  const double z = u(rng);
  const double phi = a(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

/// Momentum with log-uniform modulus in [lo, hi] and uniform direction.
inline Vec3 random_momentum(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng)) * random_unit(rng);
}

// ---------------------------------------------------------------------------
// Kinematics suite

struct KinematicsSuiteOptions {
  int angular_trials = 60;
  double angular_min_rho_ratio = 0.05;
  double angular_rel_tol = 1e-11;
  int fixed_rule_degree = 29;
  std::size_t measure_samples = 1000000;
  double min_rho_ratio = 1e-2;  // rho / nu below this counts as degenerate
};

struct KinematicsReport {
  std::uint64_t seed = 0;
  int trials = 0;
  double energy_error = 0.0;       // max | |p'|+|q'| - |p|-|q| | / (|p|+|q|)
  double rho_error = 0.0;          // max |rho(p',q') - rho(p,q)| / rho(p,q)
  double modulus_error = 0.0;      // max | |p'| - (nu + n.omega)/2 | / |p'|
  double equivariance_error = 0.0; // max |post(Op,Oq,Ow) - O post(p,q,w)| / nu
  int angular_trials = 0;
  double angular_error_inv_p = 0.0;  // adaptive quadrature vs closed form, max relative
  double angular_error_inv_p2 = 0.0;
  double angular_error_inv_pq = 0.0;
  int fixed_rule_degree = 0;
  double fixed_rule_error = 0.0;  // same oracles with one product rule aligned with n
  std::size_t measure_samples = 0;
  double measure_gain = 0.0;   // integral of phi(p',q') / (|p||q|) over p, q, omega
  double measure_plain = 0.0;  // integral of phi(p,q) / (|p||q|) over p, q, omega
  double measure_stderr = 0.0;
  double measure_z = 0.0;
};

namespace detail {

// Smooth bump supported in the ball |x - c| < r.
inline double bump(const Vec3& x, const Vec3& c, double r) {
  const Vec3 d = x - c;
  const double s2 = dot(d, d) / (r * r);
  return s2 < 1.0 ? std::exp(-1.0 / (1.0 - s2)) : 0.0;
}

}  // namespace detail

inline KinematicsReport run_kinematics_suite(std::uint64_t seed, int trials,
                                             const KinematicsSuiteOptions& opt = {}) {
  if (trials < 1) throw std::invalid_argument("run_kinematics_suite: trials must be >= 1");
  KinematicsReport rep;
  rep.seed = seed;
  rep.trials = trials;

  std::mt19937_64 rng = make_stream(seed, 0);
  int accepted = 0;
  while (accepted < trials) {
    const Vec3 p = random_momentum(rng, 1e-2, 1e1);
    const Vec3 q = random_momentum(rng, 1e-2, 1e1);
    const Vec3 w = random_unit(rng);
    const CollisionPair c = make_collision_pair(p, q);
    if (c.rho < opt.min_rho_ratio * c.nu) continue;
    ++accepted;
    const auto [pp, qp] = post_collision(p, q, w);
    rep.energy_error = std::max(rep.energy_error, std::abs(norm(pp) + norm(qp) - c.nu) / c.nu);
    rep.rho_error = std::max(rep.rho_error, std::abs(rho(pp, qp) - c.rho) / c.rho);
    const double scalar = post_collision_modulus(p, q, w);
    rep.modulus_error = std::max(rep.modulus_error, std::abs(norm(pp) - scalar) / norm(pp));
    const Mat3 o = rotation(random_unit(rng), std::uniform_real_distribution<double>(0.0, 6.0)(rng));
    const auto [rp, rq] = post_collision(o * p, o * q, normalized(o * w));
    rep.equivariance_error =
        std::max(rep.equivariance_error,
                 std::max(norm(rp - o * pp), norm(rq - o * qp)) / c.nu);
  }

  std::mt19937_64 arng = make_stream(seed, 1);
  const SphereRule fixed = build_sphere_rule(opt.fixed_rule_degree);
  rep.fixed_rule_degree = opt.fixed_rule_degree;
  int done = 0;
  while (done < opt.angular_trials) {
    const Vec3 p = random_momentum(arng, 1e-1, 1e1);
    const Vec3 q = random_momentum(arng, 1e-1, 1e1);
    const CollisionPair c = make_collision_pair(p, q);
    if (c.rho < opt.angular_min_rho_ratio * c.nu) continue;
    ++done;
    const Vec3 axis = normalized(c.n);
    auto pmod = [&](const Vec3& w) { return norm(detail::post_collision_p(c.n, c.nu, c.rho, w)); };
    auto qmod = [&](const Vec3& w) {
      return norm(c.n - detail::post_collision_p(c.n, c.nu, c.rho, w));
    };
    const double e1 = angular_integral_inv_p(p, q);
    const double e2 = angular_integral_inv_p2(p, q);
    const double e3 = angular_integral_inv_pq(p, q);
    const auto f1 = [&](const Vec3& w) { return 1.0 / pmod(w); };
    const auto f2 = [&](const Vec3& w) {
      const double m = pmod(w);
      return 1.0 / (m * m);
    };
    const auto f3 = [&](const Vec3& w) { return 1.0 / (pmod(w) * qmod(w)); };
    const double a1 = integrate_sphere_adaptive(f1, opt.angular_rel_tol, 0.0, 8, 200000, axis).value;
    const double a2 = integrate_sphere_adaptive(f2, opt.angular_rel_tol, 0.0, 8, 200000, axis).value;
    const double a3 = integrate_sphere_adaptive(f3, opt.angular_rel_tol, 0.0, 8, 200000, axis).value;
    rep.angular_error_inv_p = std::max(rep.angular_error_inv_p, std::abs(a1 - e1) / e1);
    rep.angular_error_inv_p2 = std::max(rep.angular_error_inv_p2, std::abs(a2 - e2) / e2);
    rep.angular_error_inv_pq = std::max(rep.angular_error_inv_pq, std::abs(a3 - e3) / e3);

    // Fixed product rule with its pole on n.
    const Vec3 t = std::abs(axis.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 b1 = normalized(t - dot(t, axis) * axis);
    const Vec3 b2 = cross(axis, b1);
    CompensatedSum s1, s2, s3;
    for (std::size_t k = 0; k < fixed.size(); ++k) {
      const Vec3& u = fixed.nodes[k];
      const Vec3 w = u.x * b1 + u.y * b2 + u.z * axis;
      s1.add(fixed.weights[k] * f1(w));
      s2.add(fixed.weights[k] * f2(w));
      s3.add(fixed.weights[k] * f3(w));
    }
    rep.fixed_rule_error = std::max({rep.fixed_rule_error, std::abs(s1.value() - e1) / e1,
                                     std::abs(s2.value() - e2) / e2,
                                     std::abs(s3.value() - e3) / e3});
  }
  rep.angular_trials = done;

  // Change of variables (p, q, omega) -> (p', q', omega): both integrals of a
  // bump in (p, q) against dp dq domega / (|p||q|) agree. Momenta are drawn
  // from the density proportional to 1/|p| on a ball that holds every pair
  // that can scatter into the support.
  std::mt19937_64 mrng = make_stream(seed, 2);
  const Vec3 a{0.3, 0.0, 0.0}, b{0.0, 0.3, 0.0};
  const double rad = 1.0;
  const double L = norm(a) + norm(b) + 2.0 * rad;
  const double ball = 2.0 * std::numbers::pi * L * L;  // integral of 1/|p| over the ball
  const double scale = ball * ball * 4.0 * std::numbers::pi;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&] { return L * std::sqrt(unit(mrng)) * random_unit(mrng); };
  double sg = 0.0, sg2 = 0.0, sp = 0.0, sp2 = 0.0;
  const std::size_t n = opt.measure_samples;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 p = draw();
    const Vec3 q = draw();
    const Vec3 w = random_unit(mrng);
    const auto [pp, qp] = post_collision(p, q, w);
    const double xg = scale * detail::bump(pp, a, rad) * detail::bump(qp, b, rad);
    sg += xg;
    sg2 += xg * xg;
    const Vec3 p2 = draw();
    const Vec3 q2 = draw();
    const double xp = scale * detail::bump(p2, a, rad) * detail::bump(q2, b, rad);
    sp += xp;
    sp2 += xp * xp;
  }
  rep.measure_samples = n;
  if (n == 0) return rep;
  const double dn = static_cast<double>(n);
  rep.measure_gain = sg / dn;
  rep.measure_plain = sp / dn;
  const double vg = std::max(0.0, sg2 / dn - rep.measure_gain * rep.measure_gain) / dn;
  const double vp = std::max(0.0, sp2 / dn - rep.measure_plain * rep.measure_plain) / dn;
  rep.measure_stderr = std::sqrt(vg + vp);
  rep.measure_z = rep.measure_stderr > 0.0
                      ? std::abs(rep.measure_gain - rep.measure_plain) / rep.measure_stderr
                      : 0.0;
  return rep;
}

inline void write_report(std::ostream& os, const KinematicsReport& r) {
  using detail::fmt17;
  os << "[kinematics]\n";
  os << "seed = " << r.seed << "\n";
  os << "trials = " << r.trials << "\n";
  os << "energy_error = " << fmt17(r.energy_error) << "\n";
  os << "rho_error = " << fmt17(r.rho_error) << "\n";
  os << "modulus_error = " << fmt17(r.modulus_error) << "\n";
  os << "equivariance_error = " << fmt17(r.equivariance_error) << "\n";
  os << "\n[angular]\n";
  os << "trials = " << r.angular_trials << "\n";
  os << "error_inv_p = " << fmt17(r.angular_error_inv_p) << "\n";
  os << "error_inv_p2 = " << fmt17(r.angular_error_inv_p2) << "\n";
  os << "error_inv_pq = " << fmt17(r.angular_error_inv_pq) << "\n";
  os << "fixed_rule_degree = " << r.fixed_rule_degree << "\n";
  os << "fixed_rule_error = " << fmt17(r.fixed_rule_error) << "\n";
  os << "\n[measure]\n";
  os << "samples = " << r.measure_samples << "\n";
  os << "post_collision_integral = " << fmt17(r.measure_gain) << "\n";
  os << "direct_integral = " << fmt17(r.measure_plain) << "\n";
  os << "standard_error = " << fmt17(r.measure_stderr) << "\n";
  os << "z = " << fmt17(r.measure_z) << "\n";
}

// ---------------------------------------------------------------------------
// Cutoff study

/// L^1 + L^1_{-1} distance (soft) or L^1 + L^1_1 distance (hard).
inline double cutoff_distance(const DistributionState& a, const DistributionState& b,
                              KernelFamily family) {
  return distance_l1r(a, b, 0.0) + distance_l1r(a, b, family == KernelFamily::soft ? -1.0 : 1.0);
}

struct CutoffStudyReport {
  KernelFamily family = KernelFamily::soft;
  double exponent = 0.0;
  std::vector<double> cutoffs;               // ascending
  std::vector<std::vector<double>> pairwise_dist;
  std::vector<double> distance_to_reference;  // last entry is the reference itself
  double grid_floor = 0.0;
  double fitted_rate = 0.0;     // log-log slope of (distance - floor) against k
  double reference_rate = 0.0;  // -(1-b) soft, -(2-a) hard
  bool strictly_decreasing = false;
  std::vector<int> steps;
};

namespace detail {

/// Least-squares slope of log(y) against log(x) over entries with y > 0.
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double den = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / den;
}

}  // namespace detail

/// Collision rules used to measure the discretization floor of a cutoff study.
inline GridConfig refined_rules(GridConfig g) {
  g.q_radial_n += g.q_radial_n / 2;
  g.q_direction_degree += 2;
  g.omega_degree += 2;
  return g;
}

/// Runs base_config once per cutoff from identical data and compares the
/// final states with the tightest-cutoff run. The grid floor is the change in
/// the distance between the two tightest cutoffs when both runs use refined
/// collision rules; distances at or below it are left out of the slope fit.
inline CutoffStudyReport run_cutoff_study(const RunConfig& base_config, std::vector<double> cutoffs,
                                          unsigned workers = 1, bool measure_floor = true) {
  base_config.validate();
  if (cutoffs.size() < 3) throw std::invalid_argument("cutoff study needs at least 3 cutoffs");
  std::sort(cutoffs.begin(), cutoffs.end());
  for (double k : cutoffs) {
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw std::invalid_argument("cutoff study: cutoffs must be positive and finite");
    }
  }
  const double ratio = cutoffs[1] / cutoffs[0];
  if (!(ratio > 1.0)) throw std::invalid_argument("cutoff study: cutoffs must be distinct");
  for (std::size_t i = 2; i < cutoffs.size(); ++i) {
    if (std::abs(cutoffs[i] / cutoffs[i - 1] - ratio) > 1e-9 * ratio) {
      throw std::invalid_argument("cutoff study: cutoffs must be geometrically spaced");
    }
  }

  CutoffStudyReport rep;
  rep.family = base_config.kernel.family;
  rep.exponent = base_config.kernel.exponent;
  rep.cutoffs = cutoffs;
  rep.reference_rate = rep.family == KernelFamily::soft ? -(1.0 - rep.exponent) : -(2.0 - rep.exponent);

  const GridPtr grid = make_grid(base_config.grid);
  const DistributionState f0 = make_initial_state(base_config, grid);
  const std::size_t n = cutoffs.size();
  std::vector<DistributionState> finals(n);
  rep.steps.assign(n, 0);
  // One simulation per cutoff; each is deterministic, so running them side by
  // side does not change the report.
  const unsigned outer = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(n));
  const unsigned inner = outer > 1 ? 1u : workers;
  parallel_for(n, outer, [&](std::size_t i) {
    RunConfig c = base_config;
    c.kernel.cutoff = cutoffs[i];
    SimulationResult r = simulate_from(c, f0, inner);
    rep.steps[i] = r.steps;
    finals[i] = std::move(r.final_state);
  });

  rep.pairwise_dist.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = cutoff_distance(finals[i], finals[j], rep.family);
      rep.pairwise_dist[i][j] = d;
      rep.pairwise_dist[j][i] = d;
    }
  }
  rep.distance_to_reference.resize(n);
  for (std::size_t i = 0; i < n; ++i) rep.distance_to_reference[i] = rep.pairwise_dist[i][n - 1];
  rep.strictly_decreasing = true;
  for (std::size_t i = 0; i + 2 < n; ++i) {
    if (!(rep.distance_to_reference[i + 1] < rep.distance_to_reference[i])) rep.strictly_decreasing = false;
  }

  if (measure_floor) {
    // Discretization error of the smallest measured distance: the tightest pair
    // rerun with refined collision rules.
    std::vector<DistributionState> fine(2);
    parallel_for(2, std::min(outer, 2u), [&](std::size_t i) {
      RunConfig c = base_config;
      c.kernel.cutoff = cutoffs[n - 2 + i];
      c.grid = refined_rules(c.grid);
      fine[i] = simulate_from(c, f0, inner).final_state;
    });
    rep.grid_floor = std::abs(cutoff_distance(fine[0], fine[1], rep.family) - rep.pairwise_dist[n - 2][n - 1]);
  }
  std::vector<double> ks, ds;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    ks.push_back(cutoffs[i]);
    ds.push_back(rep.distance_to_reference[i] - rep.grid_floor);
  }
  rep.fitted_rate = detail::log_log_slope(ks, ds);
  return rep;
}

inline void write_report(std::ostream& os, const CutoffStudyReport& r) {
  using detail::fmt17;
  os << "[cutoff_study]\n";
  os << "family = " << to_string(r.family) << "\n";
  os << "exponent = " << fmt17(r.exponent) << "\n";
  os << "norm = " << (r.family == KernelFamily::soft ? "L1 + L1_m1" : "L1 + L1_p1") << "\n";
  os << "reference_cutoff = " << fmt17(r.cutoffs.back()) << "\n";
  os << "grid_floor = " << fmt17(r.grid_floor) << "\n";
  os << "fitted_rate = " << fmt17(r.fitted_rate) << "\n";
  os << "reference_rate = " << fmt17(r.reference_rate) << "\n";
  os << "strictly_decreasing = " << (r.strictly_decreasing ? "true" : "false") << "\n";
  os << "\n[distance_to_reference]\n";
  os << "cutoff,distance,steps\n";
  for (std::size_t i = 0; i < r.cutoffs.size(); ++i) {
    os << fmt17(r.cutoffs[i]) << "," << fmt17(r.distance_to_reference[i]) << "," << r.steps[i] << "\n";
  }
}

/// Pairwise distance matrix as CSV; the first row and column hold the cutoffs.
inline void write_distance_matrix_csv(std::ostream& os, const CutoffStudyReport& r,
                                      const std::string& comment_header = {}) {
  using detail::fmt17;
  os << comment_header << "k";
  for (double k : r.cutoffs) os << "," << fmt17(k);
  os << "\n";
  for (std::size_t i = 0; i < r.cutoffs.size(); ++i) {
    os << fmt17(r.cutoffs[i]);
    for (double d : r.pairwise_dist[i]) os << "," << fmt17(d);
    os << "\n";
  }
}

// ---------------------------------------------------------------------------
// Symmetry suite

/// Permutation of grid nodes induced by a rotation that maps the direction
/// rule onto itself: perm[i] is the node that node i is carried to.
struct GridRotation {
  std::string name;
  Mat3 matrix;
  std::vector<std::size_t> perm;
};

/// pi rotation about the x axis: (x, y, z) -> (x, -y, -z).
inline GridRotation grid_rotation_x_pi(const MomentumGrid& grid) {
  const SphereRule& d = grid.directions();
  const std::size_t nd = d.size(), n_az = d.n_azimuth, n_pol = d.n_polar;
  GridRotation r{"x_pi", {{Vec3{1, 0, 0}, Vec3{0, -1, 0}, Vec3{0, 0, -1}}}, {}};
  r.perm.resize(grid.size());
  for (std::size_t s = 0; s < grid.n_shells(); ++s) {
    for (std::size_t ring = 0; ring < n_pol; ++ring) {
      for (std::size_t a = 0; a < n_az; ++a) {
        r.perm[s * nd + ring * n_az + a] = s * nd + (n_pol - 1 - ring) * n_az + (n_az - 1 - a);
      }
    }
  }
  return r;
}

/// Rotation by m azimuthal spacings about the z axis.
inline GridRotation grid_rotation_z(const MomentumGrid& grid, int m) {
  const SphereRule& d = grid.directions();
  const std::size_t nd = d.size(), n_az = d.n_azimuth, n_pol = d.n_polar;
  const double angle = 2.0 * std::numbers::pi * m / static_cast<double>(n_az);
  GridRotation r{"z_" + std::to_string(m), rotation(Vec3{0, 0, 1}, angle), {}};
  const std::size_t shift = static_cast<std::size_t>(((m % static_cast<int>(n_az)) + n_az) % n_az);
  r.perm.resize(grid.size());
  for (std::size_t s = 0; s < grid.n_shells(); ++s) {
    for (std::size_t ring = 0; ring < n_pol; ++ring) {
      for (std::size_t a = 0; a < n_az; ++a) {
        r.perm[s * nd + ring * n_az + a] = s * nd + ring * n_az + (a + shift) % n_az;
      }
    }
  }
  return r;
}

/// (f o O^{-1}) on the grid: the value at node perm[i] is the old value at i.
inline DistributionState rotate_state(const DistributionState& s, const GridRotation& r) {
  std::vector<double> g(s.g.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[r.perm[i]] = s.g[i];
  return DistributionState(s.grid, std::move(g), s.time);
}

/// Largest over shells of the direction variance of g relative to its squared mean.
inline double direction_variance(const DistributionState& s) {
  const MomentumGrid& grid = *s.grid;
  const SphereRule& d = grid.directions();
  double worst = 0.0;
  for (std::size_t sh = 0; sh < grid.n_shells(); ++sh) {
    CompensatedSum m, w;
    for (std::size_t j = 0; j < d.size(); ++j) {
      m.add(d.weights[j] * s.g[sh * d.size() + j]);
      w.add(d.weights[j]);
    }
    const double mean = m.value() / w.value();
    if (mean == 0.0) continue;
    CompensatedSum v;
    for (std::size_t j = 0; j < d.size(); ++j) {
      const double e = s.g[sh * d.size() + j] - mean;
      v.add(d.weights[j] * e * e);
    }
    worst = std::max(worst, v.value() / w.value() / (mean * mean));
  }
  return worst;
}

struct SymmetryReport {
  double max_direction_variance = 0.0;  // isotropic data, over every accepted state
  std::string rotation;
  double equivariance_l1 = 0.0;         // ||evolve(O f0) - O evolve(f0)||_{L^1}
  double n0 = 0.0;                       // N of the anisotropic initial data
  double rotated_data_l1 = 0.0;          // ||O f0 - f0||_{L^1}, nonzero for a meaningful check
  bool beta_zero_matches_canonical = false;
  int steps = 0;
};

inline SymmetryReport run_symmetry_suite(const RunConfig& config, unsigned workers = 1) {
  SymmetryReport rep;
  const GridPtr grid = make_grid(config.grid);

  RunConfig iso = config;
  iso.init.kind = InitKind::canonical_small;
  const SimulationResult iso_run = simulate_from(iso, make_initial_state(iso, grid), workers,
                                                 [&](const DistributionState& s) {
                                                   rep.max_direction_variance = std::max(
                                                       rep.max_direction_variance,
                                                       direction_variance(s));
                                                 });
  rep.steps = iso_run.steps;

  RunConfig flat = iso;
  flat.init.kind = InitKind::anisotropic;
  flat.init.beta = 0.0;
  const SimulationResult flat_run = simulate_from(flat, make_initial_state(flat, grid), workers);
  rep.beta_zero_matches_canonical = flat_run.final_state.g == iso_run.final_state.g;

  // Anisotropic data about an axis that no grid rotation fixes, so the
  // rotated data differ from the original.
  RunConfig aniso = config;
  aniso.init.kind = InitKind::anisotropic;
  aniso.init.axis = normalized(Vec3{1.0, 2.0, 3.0});
  if (aniso.init.beta == 0.0) aniso.init.beta = 1.0;
  const GridRotation rot = grid_rotation_x_pi(*grid);
  rep.rotation = rot.name;
  const DistributionState f0 = make_initial_state(aniso, grid);
  rep.n0 = norm_l1r(f0, 0.0);
  const SimulationResult a = simulate_from(aniso, f0, workers);
  const SimulationResult b = simulate_from(aniso, rotate_state(f0, rot), workers);
  rep.rotated_data_l1 = distance_l1r(rotate_state(f0, rot), f0, 0.0);
  rep.equivariance_l1 = distance_l1r(b.final_state, rotate_state(a.final_state, rot), 0.0);
  return rep;
}

inline void write_report(std::ostream& os, const SymmetryReport& r) {
  using detail::fmt17;
  os << "[isotropy]\n";
  os << "max_direction_variance = " << fmt17(r.max_direction_variance) << "\n";
  os << "steps = " << r.steps << "\n";
  os << "beta_zero_matches_canonical = " << (r.beta_zero_matches_canonical ? "true" : "false")
     << "\n";
  os << "\n[equivariance]\n";
  os << "rotation = " << r.rotation << "\n";
  os << "l1_difference = " << fmt17(r.equivariance_l1) << "\n";
  os << "n0 = " << fmt17(r.n0) << "\n";
  os << "rotated_data_l1 = " << fmt17(r.rotated_data_l1) << "\n";
  os << "relative = " << fmt17(r.n0 > 0 ? r.equivariance_l1 / r.n0 : 0.0) << "\n";
}

}  // namespace mboltz
