#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "mboltz/diagnostics.hpp"

using namespace mboltz;
namespace {

RunConfig small_run(KernelSpec k) {
  RunConfig c;
  c.kernel = k;
  c.grid.radial_n = 12;
  c.grid.q_radial_n = 12;
  c.grid.direction_degree = 3;
  c.grid.q_direction_degree = 3;
  c.grid.omega_degree = 5;
  c.integrator.t_end = 50;
  return c;
}

KinematicsSuiteOptions quick_options() {
  KinematicsSuiteOptions o;
  o.angular_trials = 5;
  o.measure_samples = 20000;
  return o;
}

// --- oracles --------------------------------------------------------------

TEST(DiagnosticsOracle, LogLogSlope) {
  const std::vector<double> x{1, 2, 4, 8};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
  EXPECT_NEAR(detail::log_log_slope(x, y), -1.5, 1e-12);
  // Non-positive entries are skipped.
  y[1] = 0.0;
  EXPECT_NEAR(detail::log_log_slope(x, y), -1.5, 1e-12);
  y[2] = -1.0;
  EXPECT_NEAR(detail::log_log_slope(x, y), -1.5, 1e-12);
  y[3] = 0.0;
  EXPECT_TRUE(std::isnan(detail::log_log_slope(x, y)));
}

TEST(DiagnosticsOracle, RefinedRulesOnlyTouchCollisionRules) {
  GridConfig g;
  const GridConfig r = refined_rules(g);
  EXPECT_EQ(r.radial_n, g.radial_n);
  EXPECT_EQ(r.direction_degree, g.direction_degree);
  EXPECT_EQ(r.q_radial_n, g.q_radial_n + g.q_radial_n / 2);
  EXPECT_EQ(r.q_direction_degree, g.q_direction_degree + 2);
  EXPECT_EQ(r.omega_degree, g.omega_degree + 2);
}

TEST(DiagnosticsOracle, RandomHelpers) {
  auto rng = make_stream(5, 0);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_NEAR(norm(random_unit(rng)), 1.0, 1e-14);
    const double m = norm(random_momentum(rng, 0.1, 10.0));
    EXPECT_GE(m, 0.1 * (1 - 1e-12));
    EXPECT_LE(m, 10.0 * (1 + 1e-12));
  }
  auto a = make_stream(5, 1), b = make_stream(5, 1), c = make_stream(5, 2), d = make_stream(6, 1);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

TEST(DiagnosticsOracle, DirectionVariance) {
  const GridPtr grid = MomentumGrid::make(6, 10.0, RadialMapping::stretched, 5);
  const auto iso = DistributionState::from_function(grid, [](const Vec3& p) { return std::exp(-norm(p)); });
  EXPECT_LT(direction_variance(iso), 1e-28);
  // 1 + z: mean 1, variance of z over the sphere 1/3.
  const auto lin = DistributionState::from_function(grid, [](const Vec3& p) { return 1.0 + p.z / norm(p); });
  EXPECT_NEAR(direction_variance(lin), 1.0 / 3.0, 1e-12);
}

TEST(DiagnosticsOracle, GridRotationsArePermutationsMatchingTheMatrix) {
  const GridPtr grid = MomentumGrid::make(4, 10.0, RadialMapping::stretched, 5);
  for (const GridRotation& r : {grid_rotation_x_pi(*grid), grid_rotation_z(*grid, 1), grid_rotation_z(*grid, 3)}) {
    std::vector<int> hit(grid->size(), 0);
    for (std::size_t i = 0; i < grid->size(); ++i) {
      ++hit[r.perm[i]];
      EXPECT_EQ(grid->shell_of(r.perm[i]), grid->shell_of(i));
      EXPECT_LT(norm(r.matrix * grid->direction(i) - grid->direction(r.perm[i])), 1e-12) << r.name;
    }
    for (int h : hit) EXPECT_EQ(h, 1);
  }
}

TEST(DiagnosticsOracle, RotateStateMovesValues) {
  const GridPtr grid = MomentumGrid::make(4, 10.0, RadialMapping::stretched, 5);
  const Vec3 axis{0.0, 0.0, 1.0};
  const auto s = DistributionState::from_function(grid, [&](const Vec3& p) { return 2.0 + dot(p, axis) / norm(p); });
  const GridRotation r = grid_rotation_x_pi(*grid);
  const auto t = rotate_state(s, r);
  const auto expect = DistributionState::from_function(grid, [&](const Vec3& p) { return 2.0 - dot(p, axis) / norm(p); });
  for (std::size_t i = 0; i < s.g.size(); ++i) EXPECT_NEAR(t.g[i], expect.g[i], 1e-12 * expect.g[i]);
}

TEST(DiagnosticsOracle, KinematicsReportIsDeterministicPerSeed) {
  const auto a = run_kinematics_suite(11, 500, quick_options());
  const auto b = run_kinematics_suite(11, 500, quick_options());
  const auto c = run_kinematics_suite(12, 500, quick_options());
  std::ostringstream sa, sb, sc;
  write_report(sa, a);
  write_report(sb, b);
  write_report(sc, c);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_NE(sa.str(), sc.str());
  EXPECT_EQ(a.trials, 500);
  EXPECT_THROW(run_kinematics_suite(1, 0), std::invalid_argument);
}

TEST(DiagnosticsOracle, KinematicsReportLayout) {
  const auto r = run_kinematics_suite(3, 100, quick_options());
  std::ostringstream os;
  write_report(os, r);
  const std::string s = os.str();
  for (const char* key : {"[kinematics]", "[angular]", "[measure]", "seed = 3", "trials = 100",
                          "energy_error = ", "rho_error = ", "modulus_error = ",
                          "equivariance_error = "}) {
    EXPECT_NE(s.find(key), std::string::npos) << key;
  }
}

TEST(DiagnosticsOracle, CutoffStudyRejectsBadLadders) {
  const RunConfig c = small_run(KernelSpec::soft(0.5));
  EXPECT_THROW(run_cutoff_study(c, {2, 4}), std::invalid_argument);
  EXPECT_THROW(run_cutoff_study(c, {2, 4, 9}), std::invalid_argument);
  EXPECT_THROW(run_cutoff_study(c, {2, 2, 2}), std::invalid_argument);
  EXPECT_THROW(run_cutoff_study(c, {0, 4, 8}), std::invalid_argument);
  EXPECT_THROW(run_cutoff_study(c, {2, 4, std::numeric_limits<double>::infinity()}),
               std::invalid_argument);
}

TEST(DiagnosticsOracle, CutoffDistanceOfIdenticalRunsIsZero) {
  RunConfig c = small_run(KernelSpec::soft(0.5));
  const GridPtr grid = make_grid(c.grid);
  const auto f0 = make_initial_state(c, grid);
  c.kernel.cutoff = 4;
  const auto a = simulate_from(c, f0).final_state;
  const auto b = simulate_from(c, f0).final_state;
  EXPECT_EQ(cutoff_distance(a, b, KernelFamily::soft), 0.0);
  EXPECT_EQ(cutoff_distance(a, b, KernelFamily::hard), 0.0);
  EXPECT_GT(cutoff_distance(a, f0, KernelFamily::soft), 0.0);
}

// --- properties -----------------------------------------------------------

class SmallCutoffStudy : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    report_ = new CutoffStudyReport(run_cutoff_study(small_run(KernelSpec::soft(0.5)), {8, 2, 4}));
  }
  static void TearDownTestSuite() {
    delete report_;
    report_ = nullptr;
  }
  static CutoffStudyReport* report_;
};
CutoffStudyReport* SmallCutoffStudy::report_ = nullptr;

TEST_F(SmallCutoffStudy, MatrixIsSymmetricWithZeroDiagonal) {
  const auto& m = report_->pairwise_dist;
  ASSERT_EQ(m.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(m[i][i], 0.0);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(m[i][j], m[j][i]);
      if (i != j) {
        EXPECT_GT(m[i][j], 0.0);
      }
    }
  }
  // Triangle inequality of a norm distance.
  EXPECT_LE(m[0][2], m[0][1] + m[1][2] + 1e-15);
}

TEST_F(SmallCutoffStudy, LadderIsSortedAndReferenceIsLast) {
  EXPECT_EQ(report_->cutoffs, (std::vector<double>{2, 4, 8}));
  EXPECT_EQ(report_->distance_to_reference.back(), 0.0);
  EXPECT_EQ(report_->reference_rate, -0.5);
  EXPECT_TRUE(report_->strictly_decreasing);
  EXPECT_GE(report_->grid_floor, 0.0);
  for (int s : report_->steps) EXPECT_GT(s, 0);
}

TEST_F(SmallCutoffStudy, WorkerCountDoesNotChangeReport) {
  const auto r = run_cutoff_study(small_run(KernelSpec::soft(0.5)), {2, 4, 8}, 3);
  std::ostringstream a, b;
  write_report(a, *report_);
  write_distance_matrix_csv(a, *report_);
  write_report(b, r);
  write_distance_matrix_csv(b, r);
  EXPECT_EQ(a.str(), b.str());
}

TEST_F(SmallCutoffStudy, Writers) {
  std::ostringstream os;
  write_distance_matrix_csv(os, *report_, "# h\n");
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "# h");
  std::getline(is, line);
  EXPECT_EQ(line, "k,2,4,8");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 3);

  std::ostringstream rep;
  write_report(rep, *report_);
  EXPECT_NE(rep.str().find("cutoff,distance,steps\n2,"), std::string::npos);
  EXPECT_NE(rep.str().find("norm = L1 + L1_m1"), std::string::npos);
}

TEST(DiagnosticsProperty, SymmetrySuiteOnSmallGrid) {
  RunConfig c = small_run(KernelSpec::hard(1.0, 8));
  c.grid.direction_degree = 5;
  c.grid.q_direction_degree = 5;
  const SymmetryReport r = run_symmetry_suite(c);
  EXPECT_LE(r.max_direction_variance, 1e-8);
  EXPECT_TRUE(r.beta_zero_matches_canonical);
  EXPECT_GT(r.rotated_data_l1, 1e-3 * r.n0);
  EXPECT_LE(r.equivariance_l1, 1e-6 * r.n0);
  EXPECT_GT(r.steps, 0);
  std::ostringstream os;
  write_report(os, r);
  EXPECT_NE(os.str().find("rotation = " + r.rotation), std::string::npos);
}

TEST(DiagnosticsProperty, KinematicsSuiteMeetsTolerances) {
  const auto r = run_kinematics_suite(7, 2000, quick_options());
  EXPECT_LE(r.energy_error, 1e-10);
  EXPECT_LE(r.rho_error, 1e-10);
  EXPECT_LE(r.modulus_error, 1e-12);
  EXPECT_LE(r.equivariance_error, 1e-12);
  EXPECT_LE(std::max({r.angular_error_inv_p, r.angular_error_inv_p2, r.angular_error_inv_pq}), 1e-8);
}

}  // namespace
