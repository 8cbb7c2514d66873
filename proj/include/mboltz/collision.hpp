#pragma once

// Cutoff collision operator Q_k at the nodes of a momentum grid.
//
// For an output node p the q-integral uses a product rule rotated into a frame
// with pole p^, and the omega-integral a sphere rule with pole n^ = (p+q)^.
// Everything that depends only on |p| (kernel weights, post-collision radii,
// local post-collision directions) is computed once per shell. Within one
// polar ring of the direction rule, the output directions differ by azimuthal
// rotations that permute the grid, so interpolation stencils are built once
// per ring and re-used against azimuthally shifted copies of g.
//
// The operator acts on the ball bounded by the outermost shell: a collision
// (p, q, omega) enters gain and loss alike only if |q|, |p'| and |q'| all lie
// inside it. That keeps the discrete integrand antisymmetric under
// (p, q) <-> (p', q') and an equilibrium exactly stationary.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mboltz/cosmology.hpp"
#include "mboltz/error.hpp"
#include "mboltz/kernel.hpp"
#include "mboltz/kinematics.hpp"
#include "mboltz/numeric.hpp"
#include "mboltz/quadrature.hpp"
#include "mboltz/state.hpp"
#include "mboltz/vec3.hpp"

namespace mboltz {

/// rho^{2-b}/(|p||q|) with 1{rho >= 1/k} (soft), rho^{2+a}/(|p||q|) with 1{rho <= k} (hard).
inline double kernel_weight(const CollisionPair& pair, const KernelSpec& kernel) {
  const double np = norm(pair.p), nq = norm(pair.q);
  if (!(np > 0.0) || !(nq > 0.0)) {
    throw std::invalid_argument("kernel_weight: momenta must have nonzero modulus");
  }
  if (!kernel.admits(pair.rho)) return 0.0;
  return std::pow(pair.rho, kernel.rho_power()) / (np * nq);
}

/// Rules for the q-integral (radial x direction) and the omega-integral.
struct CollisionRules {
  RadialRule q_radial;
  SphereRule q_directions;
  SphereRule omega;

  static CollisionRules make(int q_radial_n, double r_max, RadialMapping mapping,
                             int q_direction_degree, int omega_degree) {
    return {build_radial_rule(q_radial_n, r_max, mapping), build_sphere_rule(q_direction_degree),
            build_sphere_rule(omega_degree)};
  }
};

struct CollisionOptions {
  /// Rescale the loss term by (1 + l0 + l1 |p|) so that the grid sums of Q and
  /// |p| Q vanish.
  bool conservative = false;
  unsigned workers = 1;
};

/// Gain and loss parts of Q_k at every grid node, prefactor included, in
/// units of f per unit time.
struct CollisionTerms {
  std::vector<double> gain;
  std::vector<double> loss;
  std::vector<double> loss_rate;  // loss / f, defined also where f = 0
};

struct ConservationResidual {
  double number = 0.0;  // sum_p W_p Q(p)
  double energy = 0.0;  // sum_p W_p |p| Q(p)
};

class CollisionOperator {
 public:
  /// Interpolation plans are kept in memory when they fit in `cache_limit_bytes`;
  /// otherwise they are rebuilt on every evaluation. Results are identical.
  static constexpr std::size_t kDefaultCacheLimit = std::size_t{1} << 30;

  CollisionOperator(GridPtr grid, KernelSpec kernel, CollisionRules rules,
                    std::size_t cache_limit_bytes = kDefaultCacheLimit)
      : grid_(std::move(grid)), kernel_(kernel), rules_(std::move(rules)) {
    if (!grid_) throw std::invalid_argument("CollisionOperator: null grid");
    kernel_.validate();
    if (rules_.q_radial.size() == 0 || rules_.q_directions.size() == 0 || rules_.omega.size() == 0) {
      throw std::invalid_argument("CollisionOperator: empty rule");
    }
    const SphereRule& dirs = grid_->directions();
    if (dirs.n_polar <= 0 || dirs.n_azimuth <= 0 ||
        static_cast<std::size_t>(dirs.n_polar) * dirs.n_azimuth != dirs.size()) {
      throw std::invalid_argument("CollisionOperator: grid directions must form a product rule");
    }
    build_ring_frames();
    if (plan_bytes_estimate() <= cache_limit_bytes) cache_ = std::make_shared<PlanCache>();
  }

  const MomentumGrid& grid() const { return *grid_; }
  const KernelSpec& kernel() const { return kernel_; }
  const CollisionRules& rules() const { return rules_; }

  /// Gain, loss and loss rate without the prefactor.
  CollisionTerms terms(const DistributionState& state, unsigned workers = 1,
                       bool with_gain = true) const {
    check_state(state);
    const MomentumGrid& grid = *grid_;
    const std::size_t size = grid.size();
    CollisionTerms out;
    out.gain.assign(with_gain ? size : 0, 0.0);
    out.loss.assign(size, 0.0);
    out.loss_rate.assign(size, 0.0);
    if (std::all_of(state.g.begin(), state.g.end(), [](double v) { return v == 0.0; })) return out;

    const std::vector<std::vector<double>> shifted = azimuth_shifts(state.g);
    const auto* cache = cached_plans(workers);
    parallel_for(grid.n_shells(), workers, [&](std::size_t shell) {
      evaluate_shell(shell, state, shifted, with_gain, cache, out);
    });
    for (std::size_t i = 0; i < size; ++i) {
      if (!std::isfinite(out.loss_rate[i]) || (with_gain && !std::isfinite(out.gain[i]))) {
        throw NumericalError("collision operator: non-finite accumulation at node " +
                             std::to_string(i));
      }
    }
    return out;
  }

  /// Q_k(f, f) at every grid node (time derivative of f).
  std::vector<double> apply(const DistributionState& state, const CosmologyParams& cosmo, double t,
                            const CollisionOptions& options = {}) const {
    const double pf = prefactor(cosmo, kernel_, t);
    const CollisionTerms tm = terms(state, options.workers);
    const std::size_t size = grid_->size();
    std::vector<double> q(size);
    double l0 = 0.0, l1 = 0.0;
    if (options.conservative) std::tie(l0, l1) = conservative_multipliers(tm);
    for (std::size_t i = 0; i < size; ++i) {
      const double scale = 1.0 + l0 + l1 * grid_->radius(i);
      q[i] = pf * (tm.gain[i] - tm.loss[i] * scale);
    }
    return q;
  }

  /// max_p of the loss rate Q^-(f)(p)/f(p), prefactor included.
  double loss_rate_bound(const DistributionState& state, const CosmologyParams& cosmo, double t,
                         unsigned workers = 1) const {
    const CollisionTerms tm = terms(state, workers, /*with_gain=*/false);
    double m = 0.0;
    for (double v : tm.loss_rate) m = std::max(m, v);
    return prefactor(cosmo, kernel_, t) * m;
  }

  /// Multipliers (l0, l1) with sum W (G - L (1 + l0 + l1 r)) = 0 and the same
  /// with weight r. Falls back to l1 = 0 when the 2x2 system is singular.
  std::pair<double, double> conservative_multipliers(const CollisionTerms& tm) const {
    const MomentumGrid& grid = *grid_;
    CompensatedSum a00, a01, a11, b0, b1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double w = grid.weight(i), r = grid.radius(i);
      const double l = w * tm.loss[i];
      const double d = w * (tm.gain[i] - tm.loss[i]);
      a00.add(l);
      a01.add(l * r);
      a11.add(l * r * r);
      b0.add(d);
      b1.add(d * r);
    }
    const double A00 = a00.value(), A01 = a01.value(), A11 = a11.value();
    const double B0 = b0.value(), B1 = b1.value();
    if (!(A00 > 0.0)) return {0.0, 0.0};
    const double det = A00 * A11 - A01 * A01;
    if (!(std::abs(det) > 1e-12 * A00 * A11)) return {B0 / A00, 0.0};
    return {(B0 * A11 - B1 * A01) / det, (A00 * B1 - A01 * B0) / det};
  }

 private:
  // State-independent data of one output shell.
  struct ShellGeometry {
    std::vector<double> q_weight;   // W_q * kernel weight, per q node
    std::vector<Vec3> q_dir;        // local unit direction of q
    std::vector<double> q_radius;
    std::vector<double> omega_in;   // omega weight of collisions that stay in the domain
    std::vector<double> coeff;      // W_omega / (w(|p'|) w(|q'|)), per (q, omega)
    std::vector<Vec3> pp_dir, qp_dir;
    std::vector<double> pp_radius, qp_radius;
  };

  void check_state(const DistributionState& state) const {
    if (!state.grid || (state.grid != grid_ && !(*state.grid == *grid_))) {
      throw std::invalid_argument("CollisionOperator: state lives on a different grid");
    }
    if (state.g.size() != grid_->size()) {
      throw std::invalid_argument("CollisionOperator: state size mismatch");
    }
  }

  // Frame of the first (az = 0) direction of each polar ring: columns e1, e2, e3
  // with e3 = p^ and e1 = (z x p^)^, which rotates with p under z-rotations.
  void build_ring_frames() {
    const SphereRule& dirs = grid_->directions();
    ring_frames_.clear();
    for (int ring = 0; ring < dirs.n_polar; ++ring) {
      const Vec3 e3 = dirs.nodes[static_cast<std::size_t>(ring) * dirs.n_azimuth];
      Vec3 t = cross(Vec3{0.0, 0.0, 1.0}, e3);
      if (norm(t) < 1e-12) t = cross(Vec3{1.0, 0.0, 0.0}, e3);
      const Vec3 e1 = normalized(t);
      const Vec3 e2 = cross(e3, e1);
      ring_frames_.push_back(Mat3::from_columns(e1, e2, e3));
    }
  }

  // shifted[m][shell, ring, az] = g[shell, ring, (az + m) mod n_az].
  std::vector<std::vector<double>> azimuth_shifts(const std::vector<double>& g) const {
    const SphereRule& dirs = grid_->directions();
    const std::size_t n_az = static_cast<std::size_t>(dirs.n_azimuth);
    const std::size_t n_rings = static_cast<std::size_t>(dirs.n_polar);
    const std::size_t nd = dirs.size();
    std::vector<std::vector<double>> out(n_az, std::vector<double>(g.size()));
    for (std::size_t m = 0; m < n_az; ++m) {
      for (std::size_t s = 0; s < grid_->n_shells(); ++s) {
        for (std::size_t ring = 0; ring < n_rings; ++ring) {
          const std::size_t base = s * nd + ring * n_az;
          for (std::size_t a = 0; a < n_az; ++a) out[m][base + a] = g[base + (a + m) % n_az];
        }
      }
    }
    return out;
  }

  ShellGeometry shell_geometry(double rp) const {
    const RadialRule& qr = rules_.q_radial;
    const SphereRule& qd = rules_.q_directions;
    const SphereRule& om = rules_.omega;
    const double r_max = grid_->radial().nodes.back();
    const std::size_t nq = qr.size() * qd.size();
    const std::size_t nw = om.size();
    ShellGeometry geo;
    geo.q_weight.resize(nq);
    geo.q_dir.resize(nq);
    geo.q_radius.resize(nq);
    geo.omega_in.assign(nq, 0.0);
    geo.coeff.assign(nq * nw, 0.0);
    geo.pp_dir.resize(nq * nw);
    geo.qp_dir.resize(nq * nw);
    geo.pp_radius.assign(nq * nw, 0.0);
    geo.qp_radius.assign(nq * nw, 0.0);

    const Vec3 p{0.0, 0.0, rp};
    for (std::size_t iq = 0; iq < qr.size(); ++iq) {
      for (std::size_t jq = 0; jq < qd.size(); ++jq) {
        const std::size_t j = iq * qd.size() + jq;
        const Vec3 q = qr.nodes[iq] * qd.nodes[jq];
        const CollisionPair pair = make_collision_pair(p, q);
        geo.q_dir[j] = qd.nodes[jq];
        geo.q_radius[j] = qr.nodes[iq];
        if (qr.nodes[iq] > r_max) {
          geo.q_weight[j] = 0.0;
          continue;
        }
        geo.q_weight[j] = qr.weights[iq] * qd.weights[jq] * kernel_weight(pair, kernel_);
        if (geo.q_weight[j] == 0.0) continue;

        const double n_abs = norm(pair.n);
        const Vec3 e3 = pair.n * (1.0 / n_abs);
        Vec3 t = p - dot(p, e3) * e3;
        if (norm(t) < 1e-12 * rp) t = cross(Vec3{1.0, 0.0, 0.0}, e3);
        if (norm(t) < 1e-12) t = cross(Vec3{0.0, 1.0, 0.0}, e3);
        const Vec3 e1 = normalized(t);
        const Vec3 e2 = cross(e3, e1);
        for (std::size_t k = 0; k < nw; ++k) {
          const Vec3& u = om.nodes[k];
          const Vec3 omega = u.x * e1 + u.y * e2 + u.z * e3;
          const std::size_t jk = j * nw + k;
          const double rpp = 0.5 * (pair.nu + n_abs * u.z);
          const double rqp = pair.nu - rpp;
          if (!(rpp > 0.0) || !(rqp > 0.0) || rpp > r_max || rqp > r_max) continue;
          const Vec3 pp = detail::post_collision_p(pair.n, pair.nu, pair.rho, omega);
          const Vec3 qp = pair.n - pp;
          const double npp = norm(pp), nqp = norm(qp);
          if (!(npp > 0.0) || !(nqp > 0.0)) continue;
          geo.pp_dir[jk] = pp * (1.0 / npp);
          geo.qp_dir[jk] = qp * (1.0 / nqp);
          geo.pp_radius[jk] = rpp;
          geo.qp_radius[jk] = rqp;
          geo.coeff[jk] = om.weights[k] / (rpp * rqp * std::exp(pair.nu));
        }
        CompensatedSum in;
        for (std::size_t k = 0; k < nw; ++k) {
          if (geo.coeff[j * nw + k] != 0.0) in.add(om.weights[k]);
        }
        geo.omega_in[j] = in.value();
      }
    }
    return geo;
  }

  // Interpolation plan for the output directions of one polar ring, written
  // for the az = 0 member. Only collisions that pass the cutoff and stay in
  // the domain are kept.
  struct RingPlan {
    std::vector<double> q_coeff;  // W_q * kernel weight
    std::vector<double> q_rate;   // q_coeff * omega_in / w(|q|)
    std::vector<InterpolationTaps> q_taps;
    std::vector<std::size_t> gain_begin;  // per active q, first (p', q') pair
    // Packed (p', q') taps, pair after pair: tap_count holds the entry count
    // of each tap, entries go to tap_index / tap_weight. The omega
    // coefficient is folded into the p' weights.
    std::vector<std::uint8_t> tap_count;
    std::vector<std::int32_t> tap_index;
    std::vector<double> tap_weight;

    void push_tap(const InterpolationTaps& t, double scale) {
      tap_count.push_back(static_cast<std::uint8_t>(t.count));
      for (int k = 0; k < t.count; ++k) {
        tap_index.push_back(t.index[k]);
        tap_weight.push_back(scale * t.weight[k]);
      }
    }
  };

  struct PlanCache {
    std::once_flag once;
    std::vector<std::vector<RingPlan>> shells;
  };

  std::vector<RingPlan> build_shell_plans(std::size_t shell, bool with_gain) const {
    const MomentumGrid& grid = *grid_;
    const std::size_t n_rings = static_cast<std::size_t>(grid.directions().n_polar);
    const ShellGeometry geo = shell_geometry(grid.radial().nodes[shell]);
    const std::size_t nq = geo.q_weight.size();
    const std::size_t nw = rules_.omega.size();
    std::vector<RingPlan> plans(n_rings);
    for (std::size_t ring = 0; ring < n_rings; ++ring) {
      const Mat3& frame = ring_frames_[ring];
      RingPlan& plan = plans[ring];
      for (std::size_t j = 0; j < nq; ++j) {
        if (geo.q_weight[j] == 0.0) continue;
        plan.q_coeff.push_back(geo.q_weight[j]);
        plan.q_rate.push_back(geo.q_weight[j] * geo.omega_in[j] / momentum_weight(geo.q_radius[j]));
        plan.q_taps.push_back(interpolation_taps(grid, geo.q_radius[j], frame * geo.q_dir[j]));
        plan.gain_begin.push_back(plan.tap_count.size() / 2);
        if (!with_gain) continue;
        for (std::size_t k = 0; k < nw; ++k) {
          const std::size_t jk = j * nw + k;
          if (geo.coeff[jk] == 0.0) continue;
          plan.push_tap(interpolation_taps(grid, geo.pp_radius[jk], frame * geo.pp_dir[jk]), geo.coeff[jk]);
          plan.push_tap(interpolation_taps(grid, geo.qp_radius[jk], frame * geo.qp_dir[jk]), 1.0);
        }
      }
      plan.gain_begin.push_back(plan.tap_count.size() / 2);
    }
    return plans;
  }

  std::size_t plan_bytes_estimate() const {
    // Typical tap: 3 directions on 2 shells.
    constexpr std::size_t packed_tap = 1 + 6 * (sizeof(std::int32_t) + sizeof(double));
    const std::size_t per_ring = rules_.q_radial.size() * rules_.q_directions.size() *
                                 (2 * rules_.omega.size() * packed_tap + sizeof(InterpolationTaps));
    return grid_->n_shells() * static_cast<std::size_t>(grid_->directions().n_polar) * per_ring;
  }

  const std::vector<std::vector<RingPlan>>* cached_plans(unsigned workers) const {
    if (!cache_) return nullptr;
    std::call_once(cache_->once, [&] {
      cache_->shells.resize(grid_->n_shells());
      parallel_for(grid_->n_shells(), workers,
                   [&](std::size_t shell) { cache_->shells[shell] = build_shell_plans(shell, true); });
    });
    return &cache_->shells;
  }

  void evaluate_shell(std::size_t shell, const DistributionState& state,
                      const std::vector<std::vector<double>>& shifted, bool with_gain,
                      const std::vector<std::vector<RingPlan>>* cache, CollisionTerms& out) const {
    const SphereRule& dirs = grid_->directions();
    const std::size_t nd = dirs.size();
    const std::size_t n_az = static_cast<std::size_t>(dirs.n_azimuth);
    std::vector<RingPlan> local;
    if (!cache) local = build_shell_plans(shell, with_gain);
    const std::vector<RingPlan>& plans = cache ? (*cache)[shell] : local;

    for (std::size_t ring = 0; ring < plans.size(); ++ring) {
      const RingPlan& plan = plans[ring];
      const std::size_t n_active = plan.q_coeff.size();
      for (std::size_t m = 0; m < n_az; ++m) {
        const double* g = shifted[m].data();
        const std::size_t node = shell * nd + ring * n_az + m;
        CompensatedSum gain, rate;
        const std::uint8_t* count = plan.tap_count.data();
        const std::int32_t* index = plan.tap_index.data();
        const double* weight = plan.tap_weight.data();
        for (std::size_t a = 0; a < n_active; ++a) {
          const double gq = plan.q_taps[a].apply(g);
          if (gq != 0.0) rate.add(plan.q_rate[a] * gq);
          if (!with_gain) continue;
          double inner = 0.0;
          for (std::size_t e = plan.gain_begin[a]; e < plan.gain_begin[a + 1]; ++e) {
            const int np = count[0], nq = count[1];
            count += 2;
            double x = 0.0;
            for (int k = 0; k < np; ++k) x += weight[k] * g[index[k]];
            index += np;
            weight += np;
            if (x != 0.0) {
              double y = 0.0;
              for (int k = 0; k < nq; ++k) y += weight[k] * g[index[k]];
              inner += x * y;
            }
            index += nq;
            weight += nq;
          }
          gain.add(plan.q_coeff[a] * inner);
        }
        const double loss_rate = rate.value();
        out.loss_rate[node] = loss_rate;
        out.loss[node] = loss_rate * state.f_at(node);
        if (with_gain) out.gain[node] = gain.value();
      }
    }
  }

  GridPtr grid_;
  KernelSpec kernel_;
  CollisionRules rules_;
  std::vector<Mat3> ring_frames_;
  std::shared_ptr<PlanCache> cache_;
};

inline std::vector<double> apply_Qk(const DistributionState& state, const KernelSpec& kernel,
                                    const CosmologyParams& cosmo, double t,
                                    const CollisionRules& rules,
                                    const CollisionOptions& options = {}) {
  return CollisionOperator(state.grid, kernel, rules).apply(state, cosmo, t, options);
}

inline double loss_rate_bound(const DistributionState& state, const KernelSpec& kernel,
                              const CosmologyParams& cosmo, double t, const CollisionRules& rules,
                              unsigned workers = 1) {
  return CollisionOperator(state.grid, kernel, rules).loss_rate_bound(state, cosmo, t, workers);
}

/// Grid sums of Q and |p| Q.
inline ConservationResidual conservation_residual(const MomentumGrid& grid,
                                                  const std::vector<double>& q) {
  if (q.size() != grid.size()) throw std::invalid_argument("conservation_residual: size mismatch");
  CompensatedSum n, e;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double wq = grid.weight(i) * q[i];
    n.add(wq);
    e.add(wq * grid.radius(i));
  }
  return {n.value(), e.value()};
}

}  // namespace mboltz
