#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mboltz/collision.hpp"
#include "mboltz/config.hpp"
#include "mboltz/diagnostics.hpp"
#include "mboltz/run.hpp"

using namespace mboltz;
namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
const CosmologyParams cosmo{1.0, 1.0};

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

GridPtr small_grid() { return MomentumGrid::make(8, 20, RadialMapping::stretched, 3); }
CollisionRules small_rules() { return CollisionRules::make(6, 20, RadialMapping::stretched, 3, 5); }

// Direct evaluation of gain and loss at one node, in global coordinates.
struct NaiveTerms {
  double gain = 0, loss = 0;
};

NaiveTerms naive_terms(const DistributionState& s, const KernelSpec& kernel, const CollisionRules& rules,
                       std::size_t node) {
  const MomentumGrid& grid = *s.grid;
  const double r_dom = grid.radial().nodes.back();
  const Vec3 e3 = grid.direction(node);
  Vec3 t = cross(Vec3{0, 0, 1}, e3);
  if (norm(t) < 1e-12) t = cross(Vec3{1, 0, 0}, e3);
  const Vec3 e1 = normalized(t), e2 = cross(e3, e1);
  const Vec3 p = grid.momentum(node);
  NaiveTerms out;
  for (std::size_t iq = 0; iq < rules.q_radial.size(); ++iq) {
    if (rules.q_radial.nodes[iq] > r_dom) continue;
    for (std::size_t jq = 0; jq < rules.q_directions.size(); ++jq) {
      const Vec3& u = rules.q_directions.nodes[jq];
      const Vec3 q = rules.q_radial.nodes[iq] * (u.x * e1 + u.y * e2 + u.z * e3);
      const CollisionPair c = make_collision_pair(p, q);
      const double kw = rules.q_radial.weights[iq] * rules.q_directions.weights[jq] * kernel_weight(c, kernel);
      if (kw == 0) continue;
      const Vec3 n3 = normalized(c.n);
      const Vec3 n1 = normalized(p - dot(p, n3) * n3), n2 = cross(n3, n1);
      double gain = 0, w_in = 0;
      for (std::size_t k = 0; k < rules.omega.size(); ++k) {
        const Vec3& v = rules.omega.nodes[k];
        const auto [pp, qp] = post_collision(p, q, normalized(v.x * n1 + v.y * n2 + v.z * n3));
        if (norm(pp) > r_dom || norm(qp) > r_dom) continue;
        w_in += rules.omega.weights[k];
        gain += rules.omega.weights[k] * evaluate(s, pp) * evaluate(s, qp);
      }
      out.gain += kw * gain;
      out.loss += kw * w_in * evaluate(s, q);
    }
  }
  out.loss *= s.f_at(node);
  return out;
}

// --- oracles --------------------------------------------------------------

TEST(CollisionOracle, KernelWeightValues) {
  const auto c = make_collision_pair({1, 0, 0}, {0, 1, 0});
  EXPECT_NEAR(kernel_weight(c, KernelSpec::soft(0.5)), std::pow(2.0, 0.75), 1e-15);
  EXPECT_NEAR(kernel_weight(c, KernelSpec::hard(1.0)), std::pow(2.0, 1.5), 1e-15);
  const auto small = make_collision_pair({0.25, 0, 0}, {0, 0.25, 0});
  EXPECT_EQ(kernel_weight(small, KernelSpec::soft(0.5, 1.0)), 0.0);
  EXPECT_GT(kernel_weight(small, KernelSpec::soft(0.5, 3.0)), 0.0);
  EXPECT_EQ(kernel_weight(make_collision_pair({3, 0, 0}, {0, 3, 0}), KernelSpec::hard(1.0, 2.0)), 0.0);
}

TEST(CollisionOracle, KernelWeightRejectsZeroMomentum) {
  EXPECT_THROW(kernel_weight(make_collision_pair({0, 0, 0}, {0, 1, 0}), KernelSpec::soft(0.5)),
               std::invalid_argument);
}

TEST(CollisionOracle, ZeroStateGivesZero) {
  const auto grid = small_grid();
  const auto q = apply_Qk(DistributionState::zero(grid), KernelSpec::soft(0.5), cosmo, 0, small_rules());
  for (double v : q) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(loss_rate_bound(DistributionState::zero(grid), KernelSpec::soft(0.5), cosmo, 0, small_rules()), 0.0);
}

TEST(CollisionOracle, EquilibriumIsStationaryAtDefaultRules) {
  const GridConfig g;
  const auto grid = make_grid(g);
  const auto eq = init_family(grid, PureEquilibrium{1.0});
  for (KernelSpec k : {KernelSpec::soft(0.5, 1.0), KernelSpec::hard(1.0, inf)}) {
    const CollisionOperator op(grid, k, make_rules(g));
    const double pf = prefactor(cosmo, k, 2.0);
    EXPECT_LE(max_abs(op.apply(eq, cosmo, 2.0)), 1e-6 * pf) << to_string(k.family);
  }
}

TEST(CollisionOracle, MatchesDirectEvaluation) {
  const auto grid = small_grid();
  const CollisionRules rules = small_rules();
  const DistributionState s = init_family(grid, Anisotropic{0.02, 1.3, normalized(Vec3{1, 2, 2})});
  for (KernelSpec k : {KernelSpec::soft(0.5, 4.0), KernelSpec::hard(0.7, 6.0)}) {
    const CollisionTerms tm = CollisionOperator(grid, k, rules).terms(s);
    double scale = 0;
    for (std::size_t i = 0; i < grid->size(); ++i) scale = std::max(scale, std::abs(tm.loss[i]));
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const NaiveTerms n = naive_terms(s, k, rules, i);
      ASSERT_NEAR(tm.gain[i], n.gain, 1e-11 * scale) << i;
      ASSERT_NEAR(tm.loss[i], n.loss, 1e-11 * scale) << i;
    }
  }
}

TEST(CollisionOracle, LossRateBoundIsMaxOverNodes) {
  const auto grid = small_grid();
  const CollisionRules rules = small_rules();
  const auto k = KernelSpec::soft(0.5);
  const DistributionState s = init_family(grid, CanonicalSmall{0.01});
  const double bound = loss_rate_bound(s, k, cosmo, 0, rules);
  double brute = 0;
  for (std::size_t i = 0; i < grid->size(); ++i) brute = std::max(brute, naive_terms(s, k, rules, i).loss / s.f_at(i));
  EXPECT_GT(bound, 0.0);
  EXPECT_TRUE(std::isfinite(bound));
  EXPECT_NEAR(bound, brute * prefactor(cosmo, k, 0), 1e-12 * bound);
}

// --- properties -----------------------------------------------------------

TEST(CollisionProperty, Bilinear) {
  const auto grid = small_grid();
  const CollisionOperator op(grid, KernelSpec::hard(1.0), small_rules());
  const DistributionState s = init_family(grid, Anisotropic{0.01, 2, {0, 1, 0}});
  const double lam = 3.7;
  std::vector<double> g = s.g;
  for (double& x : g) x *= lam;
  const auto a = op.apply(s, cosmo, 0.5);
  const auto b = op.apply(DistributionState(grid, g), cosmo, 0.5);
  const double m = max_abs(a);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(b[i], lam * lam * a[i], 1e-12 * lam * lam * m);
  const double r0 = op.loss_rate_bound(s, cosmo, 0.5), r1 = op.loss_rate_bound(DistributionState(grid, g), cosmo, 0.5);
  EXPECT_NEAR(r1, lam * r0, 1e-13 * r1);
}

TEST(CollisionProperty, LossRateLinearInEpsilon) {
  const auto grid = small_grid();
  const CollisionOperator op(grid, KernelSpec::soft(0.5), small_rules());
  const double a = op.loss_rate_bound(init_family(grid, CanonicalSmall{0.01}), cosmo, 0);
  const double b = op.loss_rate_bound(init_family(grid, CanonicalSmall{0.02}), cosmo, 0);
  EXPECT_NEAR(b, 2 * a, 1e-13 * b);
}

TEST(CollisionProperty, IndependentOfWorkersAndCache) {
  const auto grid = MomentumGrid::make(12, 20, RadialMapping::stretched, 5);
  const CollisionRules rules = CollisionRules::make(10, 20, RadialMapping::stretched, 5, 5);
  const DistributionState s = init_family(grid, Anisotropic{0.01, 1, {1, 0, 0}});
  const auto k = KernelSpec::soft(0.3, 8);
  const auto ref = CollisionOperator(grid, k, rules).apply(s, cosmo, 0, {true, 1});
  for (unsigned w : {2u, 3u, 0u}) {
    EXPECT_EQ(CollisionOperator(grid, k, rules).apply(s, cosmo, 0, {true, w}), ref) << w;
  }
  EXPECT_EQ(CollisionOperator(grid, k, rules, 0).apply(s, cosmo, 0, {true, 2}), ref);
}

TEST(CollisionProperty, EquilibriumAnnihilatedForEveryKernel) {
  const auto grid = MomentumGrid::make(16, 20, RadialMapping::stretched, 5);
  const CollisionRules rules = CollisionRules::make(16, 20, RadialMapping::stretched, 5, 7);
  const auto eq = init_family(grid, PureEquilibrium{1.0});
  for (KernelSpec k : {KernelSpec::soft(0.1, 1), KernelSpec::soft(0.5, 10), KernelSpec::soft(0.9, inf),
                       KernelSpec::hard(0.0, 1), KernelSpec::hard(1.0, 10), KernelSpec::hard(1.9, inf)}) {
    const CollisionOperator op(grid, k, rules);
    const CollisionTerms tm = op.terms(eq);
    EXPECT_LE(max_abs(op.apply(eq, cosmo, 0)), 1e-10 * std::max(1.0, max_abs(tm.loss)));
  }
}

TEST(CollisionProperty, RotationEquivariance) {
  const auto grid = MomentumGrid::make(10, 20, RadialMapping::stretched, 5);
  const CollisionRules rules = CollisionRules::make(10, 20, RadialMapping::stretched, 5, 5);
  const DistributionState s = init_family(grid, Anisotropic{0.01, 1.5, normalized(Vec3{1, 2, 3})});
  const CollisionOperator op(grid, KernelSpec::hard(0.5, 10), rules);
  const auto q = op.apply(s, cosmo, 0);
  const double m = max_abs(q);
  for (const GridRotation& rot : {grid_rotation_x_pi(*grid), grid_rotation_z(*grid, 1), grid_rotation_z(*grid, 3)}) {
    const auto qr = op.apply(rotate_state(s, rot), cosmo, 0);
    for (std::size_t i = 0; i < q.size(); ++i) ASSERT_NEAR(qr[rot.perm[i]], q[i], 1e-12 * m) << rot.name;
  }
}

TEST(CollisionProperty, SoftLossMonotoneInCutoff) {
  const auto grid = small_grid();
  const DistributionState s = init_family(grid, CanonicalSmall{0.01});
  std::vector<double> prev(grid->size(), 0.0);
  for (double k : {0.5, 1.0, 2.0, 4.0, 8.0, inf}) {
    const CollisionTerms tm = CollisionOperator(grid, KernelSpec::soft(0.5, k), small_rules()).terms(s);
    for (std::size_t i = 0; i < prev.size(); ++i) {
      ASSERT_GE(tm.loss[i], prev[i]);
      ASSERT_GE(tm.gain[i], 0.0);
    }
    prev = tm.loss;
  }
}

double raw_residual(int radial_n) {
  const auto grid = MomentumGrid::make(radial_n, 20, RadialMapping::stretched, 5);
  const CollisionRules rules = CollisionRules::make(radial_n, 20, RadialMapping::stretched, 5, 7);
  const DistributionState s = init_family(grid, CanonicalSmall{0.01});
  const CollisionOperator op(grid, KernelSpec::soft(0.5), rules);
  const auto q = op.apply(s, cosmo, 0);
  return std::abs(conservation_residual(*grid, q).number);
}

TEST(CollisionProperty, RawNumberResidualShrinksWithRefinement) {
  const double a = raw_residual(12), b = raw_residual(24);
  EXPECT_LT(b, 0.5 * a);
}

TEST(CollisionProperty, ConservativeFormConservesNumberAndEnergy) {
  const GridConfig g;
  const auto grid = make_grid(g);
  const DistributionState s = init_family(grid, CanonicalSmall{0.01});
  for (KernelSpec k : {KernelSpec::soft(0.5), KernelSpec::hard(1.0)}) {
    const CollisionOperator op(grid, k, make_rules(g));
    const double pf = prefactor(cosmo, k, 0);
    const auto q = op.apply(s, cosmo, 0, {true, 1});
    const ConservationResidual r = conservation_residual(*grid, q);
    EXPECT_LE(std::abs(r.number), 1e-4 * 0.01 * 0.01 * pf);
    EXPECT_LE(std::abs(r.energy), 1e-4 * 0.01 * 0.01 * pf);
    const CollisionTerms tm = op.terms(s);
    double loss_mass = 0;
    for (std::size_t i = 0; i < grid->size(); ++i) loss_mass += grid->weight(i) * tm.loss[i];
    EXPECT_LE(std::abs(r.number), 1e-12 * pf * loss_mass);
  }
}

TEST(Collision, RejectsForeignState) {
  const CollisionOperator op(small_grid(), KernelSpec::soft(0.5), small_rules());
  const auto other = MomentumGrid::make(9, 20, RadialMapping::stretched, 3);
  EXPECT_THROW(op.apply(DistributionState::zero(other), cosmo, 0), std::invalid_argument);
}

}  // namespace
