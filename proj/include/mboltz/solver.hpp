#pragma once

// Explicit time integration of d f / dt = Q_k(f, f) on the stored g = w f.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iterator>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mboltz/collision.hpp"
#include "mboltz/cosmology.hpp"
#include "mboltz/error.hpp"
#include "mboltz/numeric.hpp"
#include "mboltz/state.hpp"

namespace mboltz {

enum class IntegratorMethod { rk4, euler };

inline const char* to_string(IntegratorMethod m) { return m == IntegratorMethod::rk4 ? "rk4" : "euler"; }

inline IntegratorMethod parse_integrator_method(const std::string& name) {
  if (name == "rk4") return IntegratorMethod::rk4;
  if (name == "euler") return IntegratorMethod::euler;
  throw std::invalid_argument("invalid integrator method '" + name + "' (expected rk4 or euler)");
}

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::rk4;
  double cfl = 0.5;
  double t_end = 1000.0;
  int max_steps = 100000;
  int output_stride = 1;
  double blowup_factor = 10.0;  // abort when ||f||_{L^inf_w} exceeds this times the initial value
  bool conservative = true;
  double freeze_tolerance = 1e-10;

  void validate() const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("integrator.cfl must lie in (0,1]");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
      throw std::invalid_argument("integrator.t_end must be > 0 and finite");
    }
    if (max_steps < 1) throw std::invalid_argument("integrator.max_steps must be >= 1");
    if (output_stride < 1) throw std::invalid_argument("output.stride must be >= 1");
    if (!(blowup_factor > 1.0)) throw std::invalid_argument("integrator.blowup_factor must be > 1");
    if (!(freeze_tolerance >= 0.0)) {
      throw std::invalid_argument("integrator.freeze_tolerance must be >= 0");
    }
  }

  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

struct StepResult {
  DistributionState state;
  double clipped_mass = 0.0;  // L^1 mass added by clipping negative values
};

namespace detail {

inline std::vector<double> g_rate(const CollisionOperator& op, const DistributionState& s,
                                  const CosmologyParams& cosmo, const CollisionOptions& options) {
  std::vector<double> q = op.apply(s, cosmo, s.time, options);
  const MomentumGrid& grid = *s.grid;
  for (std::size_t i = 0; i < q.size(); ++i) q[i] *= momentum_weight(grid.radius(i));
  return q;
}

inline DistributionState axpy(const DistributionState& s, double a, const std::vector<double>& k,
                              double time) {
  std::vector<double> g(s.g.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = s.g[i] + a * k[i];
  return DistributionState(s.grid, std::move(g), time);
}

}  // namespace detail

/// One explicit step of size dt; negative values are clipped to zero afterwards.
inline StepResult step(const CollisionOperator& op, const DistributionState& state,
                       const CosmologyParams& cosmo, double dt, IntegratorMethod method,
                       const CollisionOptions& options = {}) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be > 0");
  const double t = state.time;
  std::vector<double> g(state.g.size());
  if (method == IntegratorMethod::euler) {
    const auto k1 = detail::g_rate(op, state, cosmo, options);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = state.g[i] + dt * k1[i];
  } else {
    const auto k1 = detail::g_rate(op, state, cosmo, options);
    const auto k2 = detail::g_rate(op, detail::axpy(state, 0.5 * dt, k1, t + 0.5 * dt), cosmo, options);
    const auto k3 = detail::g_rate(op, detail::axpy(state, 0.5 * dt, k2, t + 0.5 * dt), cosmo, options);
    const auto k4 = detail::g_rate(op, detail::axpy(state, dt, k3, t + dt), cosmo, options);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = state.g[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  const MomentumGrid& grid = *state.grid;
  CompensatedSum clipped;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) {
      throw NumericalError("step: non-finite value at node " + std::to_string(i) + ", t = " +
                           std::to_string(t + dt));
    }
    if (g[i] < 0.0) {
      clipped.add(-grid.weight(i) * g[i] / momentum_weight(grid.radius(i)));
      g[i] = 0.0;
    }
  }
  return {DistributionState(state.grid, std::move(g), t + dt), clipped.value()};
}

/// Step size: cfl over the loss-rate bound, capped so that the prefactor
/// integral over the step stays below cfl / ||f||_{L^inf_w}, and by t_end.
inline double choose_dt(const KernelSpec& kernel, const CosmologyParams& cosmo, double t,
                        double loss_rate, double linf_w, const IntegratorConfig& config) {
  const double remaining = config.t_end - t;
  if (!(remaining > 0.0)) return 0.0;
  double dt = remaining;
  if (loss_rate > 0.0) dt = std::min(dt, config.cfl / loss_rate);
  if (linf_w > 0.0) dt = std::min(dt, prefactor_horizon(cosmo, kernel, t, config.cfl / linf_w));
  return dt;
}

inline double choose_dt(const CollisionOperator& op, const DistributionState& state,
                        const CosmologyParams& cosmo, double t, const IntegratorConfig& config,
                        unsigned workers = 1) {
  return choose_dt(op.kernel(), cosmo, t, op.loss_rate_bound(state, cosmo, t, workers),
                   norm_linf_w(state), config);
}

/// Columns of the time series.
struct TimeSample {
  double t = 0.0;
  double R = 0.0;
  double N = 0.0;
  double E = 0.0;
  double l1_m1 = 0.0;
  double l1_tail = 0.0;  // L^1_{-2} for soft kernels, L^1_1 for hard ones
  double linf_w = 0.0;
  double clipped_mass = 0.0;  // cumulative
  double dt = 0.0;
};

struct TimeSeries {
  KernelFamily family = KernelFamily::soft;
  std::vector<TimeSample> samples;
};

inline TimeSample sample(const DistributionState& s, const CosmologyParams& cosmo,
                         KernelFamily family, double clipped, double dt) {
  TimeSample row;
  row.t = s.time;
  row.R = scale_factor(cosmo, s.time);
  row.N = norm_l1r(s, 0.0);
  row.E = norm_l1r(s, 1.0);
  row.l1_m1 = norm_l1r(s, -1.0);
  row.l1_tail = norm_l1r(s, family == KernelFamily::soft ? -2.0 : 1.0);
  row.linf_w = norm_linf_w(s);
  row.clipped_mass = clipped;
  row.dt = dt;
  return row;
}

/// Called with the initial state and every state after an accepted step.
using StepObserver = std::function<void(const DistributionState&)>;

struct IntegrationResult {
  TimeSeries series;
  DistributionState final_state;
  int steps = 0;
  bool frozen = false;  // stopped early by the freezing criterion
};

/// Integrates from state.time to config.t_end (or max_steps).
inline IntegrationResult integrate(const CollisionOperator& op, DistributionState state,
                                   const CosmologyParams& cosmo, const IntegratorConfig& config,
                                   unsigned workers = 1, const StepObserver& observer = {}) {
  config.validate();
  cosmo.validate();
  const KernelFamily family = op.kernel().family;
  const CollisionOptions options{config.conservative, workers};
  IntegrationResult result;
  result.series.family = family;
  double clipped = 0.0;
  result.series.samples.push_back(sample(state, cosmo, family, clipped, 0.0));
  const double linf0 = norm_linf_w(state);
  if (observer) observer(state);

  int steps = 0;
  while (state.time < config.t_end && steps < config.max_steps) {
    const double t = state.time;
    const double rate = op.loss_rate_bound(state, cosmo, t, workers);
    if (!std::isfinite(rate)) {
      throw NumericalError("non-finite loss rate at t = " + std::to_string(t));
    }
    const double dt = choose_dt(op.kernel(), cosmo, t, rate, norm_linf_w(state), config);
    if (!(dt > 0.0) || !(t + dt > t)) {
      throw NumericalError("step size underflow (dt = " + std::to_string(dt) + ") at t = " +
                           std::to_string(t));
    }
    const double loss_scale = rate / prefactor(cosmo, op.kernel(), t);
    if (prefactor_integral(cosmo, op.kernel(), t, config.t_end) * loss_scale <
        config.freeze_tolerance) {
      result.frozen = true;
      break;
    }
    StepResult next = step(op, state, cosmo, dt, config.method, options);
    // Land exactly on t_end instead of a rounding neighbour.
    if (t + dt >= config.t_end || config.t_end - next.state.time < 1e-12 * config.t_end) {
      next.state.time = config.t_end;
    }
    state = std::move(next.state);
    clipped += next.clipped_mass;
    ++steps;
    const double linf = norm_linf_w(state);
    if (linf0 > 0.0 && linf > config.blowup_factor * linf0) {
      throw NumericalError("blow-up: ||f||_{L^inf_w} = " + std::to_string(linf) + " exceeds " +
                           std::to_string(config.blowup_factor) + " x initial at t = " +
                           std::to_string(state.time));
    }
    if (observer) observer(state);
    const bool last = state.time >= config.t_end || steps >= config.max_steps;
    if (steps % config.output_stride == 0 || last) {
      result.series.samples.push_back(sample(state, cosmo, family, clipped, dt));
    }
  }
  if (result.frozen && result.series.samples.back().t != state.time) {
    result.series.samples.push_back(sample(state, cosmo, family, clipped, 0.0));
  }
  result.steps = steps;
  result.final_state = std::move(state);
  return result;
}

inline std::vector<std::string> time_series_columns(KernelFamily family) {
  return {"t", "R", "N", "E", "L1_m1", family == KernelFamily::soft ? "L1_m2" : "L1_p1",
          "Linf_w", "clipped_mass", "dt"};
}

/// CSV with optional leading comment lines, one header row and 17-digit values.
inline void write_time_series_csv(std::ostream& os, const TimeSeries& ts,
                                  const std::string& comment_header = {}) {
  os << comment_header;
  const auto cols = time_series_columns(ts.family);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const TimeSample& r : ts.samples) {
    const double v[] = {r.t, r.R, r.N, r.E, r.l1_m1, r.l1_tail, r.linf_w, r.clipped_mass, r.dt};
    for (std::size_t i = 0; i < std::size(v); ++i) os << (i ? "," : "") << detail::fmt17(v[i]);
    os << "\n";
  }
}

}  // namespace mboltz
