#pragma once

// Quadrature on the two integration domains of the collision operator: the
// unit sphere and the radial half-line with measure r^2 dr.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mboltz/vec3.hpp"

namespace mboltz {

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  if (n == 1) return {{0.0}, {2.0}};
  GaussLegendre gl;
  gl.nodes.assign(n, 0.0);
  gl.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Refresh the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[n - 1 - i] = x;
    gl.nodes[i] = -x;
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) gl.nodes[n / 2] = 0.0;
  return gl;
}

/// Product rule on S^2: Gauss-Legendre in cos(theta) times a uniform azimuth
/// grid with an even number of points, offset by half a spacing. Exact for
/// spherical polynomials up to `degree`. Node index = polar * n_azimuth + azimuth.
struct SphereRule {
  int degree = 0;
  int n_polar = 0;
  int n_azimuth = 0;
  std::vector<Vec3> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

inline constexpr int kMinSphereDegree = 3;
inline constexpr int kMaxSphereDegree = 61;

inline SphereRule build_sphere_rule(int degree) {
  if (degree < kMinSphereDegree || degree > kMaxSphereDegree) {
    throw std::invalid_argument("build_sphere_rule: unsupported degree " + std::to_string(degree) +
                                " (supported: " + std::to_string(kMinSphereDegree) + ".." +
                                std::to_string(kMaxSphereDegree) + ")");
  }
  SphereRule rule;
  rule.degree = degree;
  rule.n_polar = (degree + 2) / 2;
  rule.n_azimuth = (degree % 2 == 1) ? degree + 1 : degree + 2;
  const GaussLegendre gl = gauss_legendre(rule.n_polar);
  const double dphi = 2.0 * std::numbers::pi / rule.n_azimuth;
  rule.nodes.reserve(static_cast<std::size_t>(rule.n_polar) * rule.n_azimuth);
  rule.weights.reserve(rule.nodes.capacity());
  for (int i = 0; i < rule.n_polar; ++i) {
    const double z = gl.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < rule.n_azimuth; ++j) {
      const double phi = (j + 0.5) * dphi;
      rule.nodes.push_back({s * std::cos(phi), s * std::sin(phi), z});
      rule.weights.push_back(gl.weights[i] * dphi);
    }
  }
  return rule;
}

enum class RadialMapping { linear, log, stretched };

inline const char* to_string(RadialMapping m) {
  switch (m) {
    case RadialMapping::linear: return "linear";
    case RadialMapping::log: return "log";
    case RadialMapping::stretched: return "stretched";
  }
  return "?";
}

inline RadialMapping parse_radial_mapping(const std::string& name) {
  if (name == "linear") return RadialMapping::linear;
  if (name == "log") return RadialMapping::log;
  if (name == "stretched") return RadialMapping::stretched;
  throw std::invalid_argument("invalid radial mapping '" + name +
                              "' (expected linear, log or stretched)");
}

/// Gauss-Legendre rule on (0, r_max] under a coordinate map r(s), s in [0,1].
/// Weights include the Jacobian and the r^2 measure, so sum_i w_i g(r_i)
/// approximates the integral of g(r) r^2 dr.
struct RadialRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double r_max = 0.0;
  RadialMapping mapping = RadialMapping::stretched;

  std::size_t size() const { return nodes.size(); }
};

namespace detail {

// stretched: r = r0 (e^{lambda s} - 1), linear below r0 and geometric above.
inline constexpr double kStretchScale = 1.0;
// log: geometric between r_max * kLogFloor and r_max; the sliver below is dropped.
inline constexpr double kLogFloor = 1e-6;

}  // namespace detail

inline RadialRule build_radial_rule(int n, double r_max, RadialMapping mapping) {
  if (n < 4) throw std::invalid_argument("build_radial_rule: n must be >= 4");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw std::invalid_argument("build_radial_rule: r_max must be > 0");
  }
  const GaussLegendre gl = gauss_legendre(n);
  RadialRule rule;
  rule.r_max = r_max;
  rule.mapping = mapping;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * (gl.nodes[i] + 1.0);
    const double ws = 0.5 * gl.weights[i];
    double r = 0.0;
    double jac = 0.0;
    switch (mapping) {
      case RadialMapping::linear:
        r = r_max * s;
        jac = r_max;
        break;
      case RadialMapping::log: {
        const double r_min = r_max * detail::kLogFloor;
        const double span = std::log(r_max / r_min);
        r = r_min * std::exp(span * s);
        jac = r * span;
        break;
      }
      case RadialMapping::stretched: {
        const double r0 = detail::kStretchScale;
        const double lambda = std::log1p(r_max / r0);
        r = r0 * std::expm1(lambda * s);
        jac = r0 * lambda * std::exp(lambda * s);
        break;
      }
    }
    rule.nodes[i] = std::min(r, r_max);
    rule.weights[i] = ws * jac * r * r;
  }
  return rule;
}

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
  std::size_t evaluations = 0;
};

/// Globally adaptive integral of f over S^2 in (cos theta, phi) coordinates,
/// bisecting the panel with the largest local error estimate. Each panel uses a
/// tensor Gauss-Legendre rule of `order` points per direction (polynomial
/// degree 2*order - 1); the error estimate is |coarse - sum of four children|.
/// `axis` orients the coordinate pole.
inline AdaptiveResult integrate_sphere_adaptive(const std::function<double(const Vec3&)>& f,
                                                double rel_tol, double abs_tol = 0.0,
                                                int order = 8, std::size_t max_panels = 200000,
                                                Vec3 axis = {0.0, 0.0, 1.0}) {
  if (order < 1 || 2 * order - 1 > 29) {
    throw std::invalid_argument("integrate_sphere_adaptive: panel degree must be <= 29");
  }
  const GaussLegendre gl = gauss_legendre(order);
  const Vec3 e3 = normalized(axis);
  const Vec3 trial = std::abs(e3.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const Vec3 e1 = normalized(trial - dot(trial, e3) * e3);
  const Vec3 e2 = cross(e3, e1);

  AdaptiveResult result;
  auto panel = [&](double z0, double z1, double a0, double a1) {
    const double hz = 0.5 * (z1 - z0);
    const double ha = 0.5 * (a1 - a0);
    double sum = 0.0;
    for (int i = 0; i < order; ++i) {
      const double z = z0 + hz * (gl.nodes[i] + 1.0);
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int j = 0; j < order; ++j) {
        const double phi = a0 + ha * (gl.nodes[j] + 1.0);
        const Vec3 w = (s * std::cos(phi)) * e1 + (s * std::sin(phi)) * e2 + z * e3;
        sum += gl.weights[i] * gl.weights[j] * f(w);
      }
    }
    result.evaluations += static_cast<std::size_t>(order) * order;
    return sum * hz * ha;
  };

  struct Panel {
    double z0, z1, a0, a1;
    double kids[4];  // values on the four quarter panels
    double fine;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto make = [&](double z0, double z1, double a0, double a1, double coarse) {
    const double zm = 0.5 * (z0 + z1);
    const double am = 0.5 * (a0 + a1);
    Panel p{z0, z1, a0, a1, {panel(z0, zm, a0, am), panel(zm, z1, a0, am), panel(z0, zm, am, a1),
                             panel(zm, z1, am, a1)},
            0.0, 0.0};
    p.fine = p.kids[0] + p.kids[1] + p.kids[2] + p.kids[3];
    p.error = std::abs(p.fine - coarse);
    return p;
  };

  std::priority_queue<Panel> heap;
  const double two_pi = 2.0 * std::numbers::pi;
  double running_value = 0.0, running_error = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double z0 = -1.0 + i, z1 = z0 + 1.0;
      const double a0 = j * two_pi / 4, a1 = (j + 1) * two_pi / 4;
      heap.push(make(z0, z1, a0, a1, panel(z0, z1, a0, a1)));
    }
  }
  auto totals = [&]() {
    // Re-summed from scratch so the reported value carries no update drift.
    std::priority_queue<Panel> copy = heap;
    double v = 0.0, e = 0.0;
    while (!copy.empty()) {
      v += copy.top().fine;
      e += copy.top().error;
      copy.pop();
    }
    return std::pair{v, e};
  };
  std::tie(running_value, running_error) = totals();
  while (running_error > std::max(abs_tol, rel_tol * std::abs(running_value)) &&
         heap.size() < max_panels) {
    const Panel worst = heap.top();
    heap.pop();
    const double zm = 0.5 * (worst.z0 + worst.z1);
    const double am = 0.5 * (worst.a0 + worst.a1);
    const Panel kids[4] = {
        make(worst.z0, zm, worst.a0, am, worst.kids[0]),
        make(zm, worst.z1, worst.a0, am, worst.kids[1]),
        make(worst.z0, zm, am, worst.a1, worst.kids[2]),
        make(zm, worst.z1, am, worst.a1, worst.kids[3]),
    };
    running_value -= worst.fine;
    running_error -= worst.error;
    for (const Panel& k : kids) {
      running_value += k.fine;
      running_error += k.error;
      heap.push(k);
    }
  }
  double value = 0.0, error = 0.0;
  std::tie(value, error) = totals();
  result.value = value;
  result.error = error;
  result.panels = heap.size();
  return result;
}

}  // namespace mboltz
