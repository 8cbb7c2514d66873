#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mboltz/diagnostics.hpp"
#include "mboltz/kinematics.hpp"
#include "mboltz/quadrature.hpp"

using namespace mboltz;
namespace {

constexpr double pi = std::numbers::pi;

double integrate(const SphereRule& r, const std::function<double(const Vec3&)>& f) {
  double s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
  return s;
}

double integrate(const RadialRule& r, const std::function<double(double)>& f) {
  double s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
  return s;
}

TEST(QuadratureOracle, SphereConstant) {
  EXPECT_NEAR(integrate(build_sphere_rule(3), [](const Vec3&) { return 1.0; }), 4 * pi, 1e-13);
}

TEST(QuadratureOracle, SphereQuadratic) {
  EXPECT_NEAR(integrate(build_sphere_rule(3), [](const Vec3& w) { return w.z * w.z; }), 4 * pi / 3, 1e-12);
}

TEST(QuadratureOracle, SphereInvP2HighDegree) {
  const Vec3 p{1, 0, 0}, q{0, 1, 0};
  for (int deg : {17, 21, 29}) {
    const double v = integrate(build_sphere_rule(deg), [&](const Vec3& w) {
      const double m = norm(post_collision(p, q, w).first);
      return 1.0 / (m * m);
    });
    EXPECT_LT(std::abs(v - 8 * pi) / (8 * pi), 1e-6) << "degree " << deg;
  }
}

TEST(QuadratureOracle, RadialCubeLinear) {
  for (int n : {4, 7, 12}) {
    const RadialRule r = build_radial_rule(n, 3.5, RadialMapping::linear);
    EXPECT_NEAR(integrate(r, [](double) { return 1.0; }), std::pow(3.5, 3) / 3, 1e-12);
  }
}

double gamma3_truncated(double R) { return 2.0 - std::exp(-R) * (R * R + 2 * R + 2); }

TEST(QuadratureOracle, RadialExponentialMoments) {
  const RadialRule r = build_radial_rule(32, 20, RadialMapping::stretched);
  const double v2 = integrate(r, [](double x) { return std::exp(-x); });
  EXPECT_LT(std::abs(v2 - gamma3_truncated(20)) / 2, 1e-8);
  EXPECT_LT(std::abs(v2 - 2.0) / 2.0, 1e-6);
  const double v1 = integrate(r, [](double x) { return std::exp(-x) / x; });
  const double exact1 = 1.0 - std::exp(-20.0) * 21.0;
  EXPECT_LT(std::abs(v1 - exact1), 1e-6);
}

TEST(Quadrature, RejectsBadParameters) {
  EXPECT_THROW(build_sphere_rule(2), std::invalid_argument);
  EXPECT_THROW(build_sphere_rule(kMaxSphereDegree + 1), std::invalid_argument);
  EXPECT_THROW(build_radial_rule(3, 20, RadialMapping::linear), std::invalid_argument);
  EXPECT_THROW(build_radial_rule(8, 0, RadialMapping::linear), std::invalid_argument);
  EXPECT_THROW(parse_radial_mapping("cubic"), std::invalid_argument);
  EXPECT_EQ(parse_radial_mapping("log"), RadialMapping::log);
}

TEST(QuadratureProperty, SphereRuleStructure) {
  for (int deg = kMinSphereDegree; deg <= 41; ++deg) {
    const SphereRule r = build_sphere_rule(deg);
    double total = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      ASSERT_GT(r.weights[i], 0.0);
      ASSERT_NEAR(norm(r.nodes[i]), 1.0, 1e-12);
      total += r.weights[i];
    }
    ASSERT_LT(std::abs(total - 4 * pi) / (4 * pi), 1e-12);
    ASSERT_EQ(r.size(), static_cast<std::size_t>(r.n_polar * r.n_azimuth));
  }
}

// Monomials x^a y^b z^c integrate to 2 G(a) G(b) G(c) / G(a+b+c+3) with
// G(k) = Gamma((k+1)/2), zero when any exponent is odd.
double monomial_exact(int a, int b, int c) {
  if (a % 2 || b % 2 || c % 2) return 0.0;
  auto G = [](int k) { return std::tgamma((k + 1) / 2.0); };
  return 2 * G(a) * G(b) * G(c) / std::tgamma((a + b + c + 3) / 2.0);
}

TEST(QuadratureProperty, SphereExactToDeclaredDegree) {
  for (int deg : {3, 5, 7, 11, 17}) {
    const SphereRule r = build_sphere_rule(deg);
    for (int a = 0; a <= deg; ++a) {
      for (int b = 0; a + b <= deg; ++b) {
        for (int c = 0; a + b + c <= deg; ++c) {
          const double v = integrate(r, [&](const Vec3& w) {
            return std::pow(w.x, a) * std::pow(w.y, b) * std::pow(w.z, c);
          });
          ASSERT_NEAR(v, monomial_exact(a, b, c), 1e-12) << deg << ": " << a << b << c;
        }
      }
    }
  }
}

TEST(QuadratureProperty, SphereRotationInvariantForZonalPolynomials) {
  std::mt19937_64 rng(4);
  const SphereRule r = build_sphere_rule(5);
  for (int i = 0; i < 50; ++i) {
    const Vec3 u = random_unit(rng);
    const double q2 = integrate(r, [&](const Vec3& w) { const double t = dot(w, u); return t * t; });
    const double q4 = integrate(r, [&](const Vec3& w) { const double t = dot(w, u); return t * t * t * t; });
    ASSERT_NEAR(q2, 4 * pi / 3, 1e-10);
    ASSERT_NEAR(q4, 4 * pi / 5, 1e-10);
  }
}

TEST(QuadratureProperty, RadialNodesOrderedInsideDomain) {
  for (auto m : {RadialMapping::linear, RadialMapping::log, RadialMapping::stretched}) {
    for (int n : {4, 16, 33}) {
      const RadialRule r = build_radial_rule(n, 20, m);
      ASSERT_GT(r.nodes.front(), 0.0);
      ASSERT_LE(r.nodes.back(), 20.0);
      for (int i = 1; i < n; ++i) ASSERT_LT(r.nodes[i - 1], r.nodes[i]);
      for (double w : r.weights) ASSERT_GT(w, 0.0);
    }
  }
}

TEST(QuadratureProperty, RadialErrorDropsWithRefinement) {
  const double exact = gamma3_truncated(20);
  double prev = 1.0;
  for (int n : {4, 8, 16}) {
    const double err = std::abs(integrate(build_radial_rule(n, 20, RadialMapping::stretched),
                                          [](double x) { return std::exp(-x); }) - exact);
    EXPECT_LT(err, prev / 4) << n;
    prev = err;
  }
}

TEST(QuadratureProperty, AdaptiveMatchesSmoothIntegral) {
  const AdaptiveResult r = integrate_sphere_adaptive([](const Vec3& w) { return std::exp(w.x + 2 * w.z); }, 1e-12);
  const double a = std::sqrt(5.0);
  EXPECT_NEAR(r.value, 4 * pi * std::sinh(a) / a, 1e-10);
}

}  // namespace
