#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "angenent/errors.hpp"
#include "angenent/geometry.hpp"
#include "angenent/scenarios.hpp"
#include "angenent/solvers.hpp"
#include "oracles.hpp"

namespace angenent {
namespace {

double max_residual(const Trajectory& t, const DiscreteLagrangian& dl) {
  double m = 0.0;
  for (const Vec2& r : dl.del_residual(t)) m = std::max(m, r.lpNorm<Eigen::Infinity>());
  return m;
}

double max_coordinate_difference(const Trajectory& a, const Trajectory& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a.points[i] - b.points[i]).lpNorm<Eigen::Infinity>());
  return m;
}

// Closed N = 128 torus, solved once and shared.
const std::pair<Trajectory, SolveReport>& torus128() {
  static const auto solved = [] {
    const DiscreteLagrangian dl;
    return solve_closed(angenent_initial_guess(128, dl), dl);
  }();
  return solved;
}

// Plain 2D Newton on the step equation with a finite-difference Jacobian.
std::optional<Point> newton_oracle(const Point& prev, const Point& cur, Point x, const DiscreteLagrangian& dl) {
  auto f = [&](const Vec2& y) -> Vec2 { return dl.d1(prev, cur) + dl.d0(cur, y); };
  for (int it = 0; it < 100; ++it) {
    const Vec2 fx = f(x);
    if (fx.lpNorm<Eigen::Infinity>() < 1e-15) return x;
    const Mat2 j = testing::fd_jacobian(f, x, 1e-7);
    if (std::abs(j.determinant()) < 1e-300) return std::nullopt;
    x -= j.inverse() * fx;
    if (!x.allFinite()) return std::nullopt;
  }
  return f(x).lpNorm<Eigen::Infinity>() < 1e-13 ? std::optional<Point>(x) : std::nullopt;
}

TEST(SolveConfig, Validation) {
  EXPECT_NO_THROW(SolveConfig{}.validate());
  SolveConfig c;
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.residual_tolerance = 0.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.step_tolerance = -1.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.lm_damping_shrink = 1.5;
  EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(ShootStep, RestStaysAtRest) {
  const DiscreteLagrangian dl;
  const Point p(1.3, 0.4);
  const Point next = shoot_step(p, p, dl);
  EXPECT_LE((next - p).norm(), 1e-15);
}

TEST(ShootStep, FlatMetricContinuesStraight) {
  const DiscreteLagrangian dl(MetricField::flat());
  const Point next = shoot_step(Point(1.0, 0.0), Point(1.1, 0.0), dl);
  EXPECT_NEAR(next[0], 1.2, 1e-14);
  EXPECT_NEAR(next[1], 0.0, 1e-14);
}

TEST(ShootStep, AgreesWithMultiStartNewton) {
  const DiscreteLagrangian dl;
  const Point prev(3.3, -8.5 / 256), cur(3.3, 8.5 / 256);
  const Point next = shoot_step(prev, cur, dl);
  const Point guess = 2.0 * cur - prev;
  std::vector<Point> roots;
  for (double dr : {-0.02, 0.0, 0.02}) {
    for (double dz : {-0.02, 0.0, 0.02}) {
      if (auto root = newton_oracle(prev, cur, guess + Vec2(dr, dz), dl)) roots.push_back(*root);
    }
  }
  ASSERT_FALSE(roots.empty());
  const Point nearest = *std::min_element(roots.begin(), roots.end(), [&](const Point& a, const Point& b) {
    return (a - guess).norm() < (b - guess).norm();
  });
  EXPECT_LE(std::abs(next[0] - nearest[0]), 1e-10);
  EXPECT_LE(std::abs(next[1] - nearest[1]), 1e-10);
}

TEST(ShootStep, RejectsAxis) {
  const DiscreteLagrangian dl;
  EXPECT_THROW(shoot_step(Point(0.1, 0.0), Point(0.0, 0.1), dl), LeftHalfPlane);
}

TEST(Shoot, SingleStepReturnsInputs) {
  const DiscreteLagrangian dl;
  const Point a(2.0, 0.1), b(2.1, 0.3);
  const Trajectory t = shoot(a, b, 1, dl);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_FALSE(t.closed);
  EXPECT_EQ(t.points[0], a);
  EXPECT_EQ(t.points[1], b);
  EXPECT_THROW(shoot(a, b, 0, dl), InvalidInput);
}

TEST(Shoot, FlatMetricGivesEquallySpacedLine) {
  const DiscreteLagrangian dl(MetricField::flat());
  const Point a(0.7, -0.2), b(0.9, 0.05);
  const Trajectory t = shoot(a, b, 10, dl);
  ASSERT_EQ(t.size(), 11u);
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_LE((t.points[k] - (a + double(k) * (b - a))).norm(), 1e-13);
  }
}

TEST(Shoot, ErrorsCarryStepIndex) {
  const DiscreteLagrangian dl(MetricField::flat());
  try {
    shoot(Point(0.35, 0.0), Point(0.25, 0.0), 10, dl);
    FAIL() << "expected ShootingError";
  } catch (const ShootingError& e) {
    EXPECT_EQ(e.step(), 4u);
  }
}

TEST(Shoot, AngenentLoopStopsShortOfClosing) {
  const DiscreteLagrangian dl;
  const std::size_t n = 2048;
  const double h = kAngenentStartHeight / n;
  const Trajectory t = shoot(Point(kAngenentStartRadius, -h), Point(kAngenentStartRadius, h), n, dl);
  ASSERT_EQ(t.size(), n + 1);
  const double gap = (t.points.back() - t.points.front()).norm();
  EXPECT_GT(gap, 0.0);
  EXPECT_LT(gap, 0.3);
}

TEST(Shoot, NearConservationIsSecondOrder) {
  const DiscreteLagrangian dl;
  std::vector<double> drift;
  for (std::size_t n : {256u, 512u, 1024u}) {
    const double h = kAngenentStartHeight / n;
    const Trajectory t = shoot(Point(kAngenentStartRadius, -h), Point(kAngenentStartRadius, h), n, dl);
    std::vector<double> ld;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) ld.push_back(dl.ld(t.points[k], t.points[k + 1]));
    double mean = 0.0;
    for (double v : ld) mean += v;
    mean /= ld.size();
    double worst = 0.0;
    for (double v : ld) worst = std::max(worst, std::abs(v - mean) / mean);
    drift.push_back(worst);
  }
  EXPECT_NEAR(drift[0] / drift[1], 4.0, 0.5);
  EXPECT_NEAR(drift[1] / drift[2], 4.0, 0.5);
}

TEST(SolveClosed, RejectsOpenInput) {
  const DiscreteLagrangian dl;
  const Trajectory open({Point(1, 0), Point(2, 0), Point(2, 1)}, false);
  EXPECT_THROW(solve_closed(open, dl), InvalidInput);
  const Trajectory bad({Point(1, 0), Point(-1, 0), Point(2, 1)}, true);
  EXPECT_THROW(solve_closed(bad, dl), InvalidInput);
}

TEST(SolveClosed, TorusN128) {
  const DiscreteLagrangian dl;
  const auto& [traj, report] = torus128();
  ASSERT_TRUE(report.converged);
  EXPECT_LE(report.final_residual_norm, 1e-12);
  EXPECT_LE(max_residual(traj, dl), 1e-12);
  // Second order from an N = 2048 error of 1e-6..4e-6 puts N = 128 at
  // 256 times that above the limit.
  const double excess = weighted_length(traj) - 1.8512167;
  EXPECT_GE(excess, 256 * 1e-6);
  EXPECT_LE(excess, 256 * 4e-6);
  for (std::size_t i = 1; i < report.residual_history.size(); ++i) {
    EXPECT_LT(report.residual_history[i], report.residual_history[i - 1]);
  }
  EXPECT_TRUE(report.jacobian_rank_deficient);
  EXPECT_LT(report.smallest_singular_value, 1e-8 * report.largest_singular_value);
}

TEST(SolveClosed, SolutionIsAFixedPoint) {
  const DiscreteLagrangian dl;
  const auto& solved = torus128().first;
  const auto [again, report] = solve_closed(solved, dl);
  EXPECT_TRUE(report.converged);
  EXPECT_LE(report.iterations, 1);
  EXPECT_LE(max_coordinate_difference(again, solved), 1e-12);
}

TEST(SolveClosed, CyclicShiftInvariance) {
  const DiscreteLagrangian dl;
  const Trajectory shifted = torus128().first.rotated(37);
  EXPECT_LE(max_residual(shifted, dl), 1e-12);
  const auto [again, report] = solve_closed(shifted, dl);
  EXPECT_TRUE(report.converged);
  EXPECT_LE(report.iterations, 1);
  EXPECT_LE(max_coordinate_difference(again, shifted), 1e-12);
}

TEST(SolveClosed, MirrorInvariance) {
  const DiscreteLagrangian dl;
  const Trajectory mirrored = torus128().first.mirrored();
  EXPECT_LE(max_residual(mirrored, dl), 1e-12);
}

TEST(SolveClosed, TauInvariance) {
  const DiscreteLagrangian unit(MetricField::angenent(), 1.0);
  const DiscreteLagrangian half(MetricField::angenent(), 0.5);
  const Trajectory guess = angenent_initial_guess(128, unit);
  const auto [a, ra] = solve_closed(guess, unit);
  const auto [b, rb] = solve_closed(guess, half);
  ASSERT_TRUE(ra.converged);
  ASSERT_TRUE(rb.converged);
  EXPECT_LE(max_coordinate_difference(a, b), 1e-10);
}

TEST(SolveClosed, DenseAndStructuredAgree) {
  const DiscreteLagrangian dl;
  const Trajectory guess = angenent_initial_guess(64, dl);
  SolveConfig dense;
  dense.linear_solver = LinearSolver::Dense;
  SolveConfig structured;
  structured.pin_phase = true;
  dense.pin_phase = true;
  const auto [a, ra] = solve_closed(guess, dl, structured);
  const auto [b, rb] = solve_closed(guess, dl, dense);
  ASSERT_TRUE(ra.converged);
  ASSERT_TRUE(rb.converged);
  EXPECT_NEAR(weighted_length(a), weighted_length(b), 1e-12);
  EXPECT_LE(max_coordinate_difference(a, b), 1e-8);
}

TEST(SolveClosed, DenseSolverRefusesLargeSystems) {
  const DiscreteLagrangian dl;
  SolveConfig dense;
  dense.linear_solver = LinearSolver::Dense;
  EXPECT_THROW(solve_closed(angenent_initial_guess(1024, dl), dl, dense), InvalidInput);
}

TEST(SolveClosed, PinnedPhaseKeepsFirstHeight) {
  const DiscreteLagrangian dl;
  const Trajectory guess = angenent_initial_guess(128, dl);
  SolveConfig cfg;
  cfg.pin_phase = true;
  const auto [traj, report] = solve_closed(guess, dl, cfg);
  ASSERT_TRUE(report.converged);
  EXPECT_EQ(traj.points[0][1], guess.points[0][1]);
  EXPECT_LE(max_residual(traj, dl), 1e-12);
}

TEST(SolveClosed, FlatMetricPointLoopIsASolution) {
  const DiscreteLagrangian dl(MetricField::flat());
  const Trajectory still({Point(1.0, 0.0), Point(1.0, 0.0), Point(1.0, 0.0)}, true);
  const auto [traj, report] = solve_closed(still, dl);
  EXPECT_TRUE(report.converged);
  EXPECT_EQ(report.iterations, 0);
  EXPECT_EQ(traj.points, still.points);
}

TEST(SolveClosed, IterationCapIsReported) {
  const DiscreteLagrangian dl;
  SolveConfig cfg;
  cfg.max_iterations = 1;
  const auto [traj, report] = solve_closed(angenent_initial_guess(128, dl), dl, cfg);
  EXPECT_FALSE(report.converged);
  EXPECT_EQ(report.iterations, 1);
  EXPECT_GT(report.final_residual_norm, cfg.residual_tolerance);
}

TEST(SolveOpen, FlatMetricGivesEquallySpacedLine) {
  const DiscreteLagrangian dl(MetricField::flat());
  testing::Sampler s(61);
  std::vector<Point> interior;
  for (int i = 0; i < 9; ++i) interior.push_back(s.point(0.1, 1.0, -0.5, 0.5));
  const auto [traj, report] = solve_open(Point(0, 0), Point(1, 0), interior, dl);
  ASSERT_TRUE(report.converged);
  ASSERT_EQ(traj.size(), 11u);
  EXPECT_EQ(traj.points.front(), Point(0, 0));
  EXPECT_EQ(traj.points.back(), Point(1, 0));
  for (std::size_t k = 0; k < traj.size(); ++k) {
    EXPECT_LE((traj.points[k] - Point(k / 10.0, 0.0)).norm(), 1e-12);
  }
}

TEST(SolveOpen, NoInteriorPoints) {
  const DiscreteLagrangian dl;
  const auto [traj, report] = solve_open(Point(1, 0), Point(2, 0), {}, dl);
  EXPECT_TRUE(report.converged);
  EXPECT_EQ(traj.size(), 2u);
}

TEST(SolveOpen, RejectsBadInput) {
  const DiscreteLagrangian dl;
  EXPECT_THROW(solve_open(Point(-1, 0), Point(2, 0), {Point(1, 0)}, dl), InvalidInput);
  EXPECT_THROW(solve_open(Point(0, 0), Point(2, 0), {Point(0, 1)}, dl), InvalidInput);
}

}  // namespace
}  // namespace angenent
