#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "angenent/discrete_lagrangian.hpp"
#include "angenent/trajectory.hpp"

namespace angenent {

enum class LinearSolver {
  /// O(N) block-(cyclic-)tridiagonal elimination.
  Structured,
  /// Dense normal equations; only allowed for small systems, used as a cross-check.
  Dense,
};

struct SolveConfig {
  int max_iterations = 200;
  /// Infinity norm of the Euler-Lagrange residual at which a solve stops.
  double residual_tolerance = 1e-12;
  /// Infinity norm of an accepted update below which a solve stops.
  double step_tolerance = 1e-14;
  double lm_initial_damping = 1e-6;
  double lm_damping_growth = 10.0;
  double lm_damping_shrink = 0.1;
  /// Closed solves only: hold z of point 0 fixed to remove the phase freedom.
  bool pin_phase = false;
  LinearSolver linear_solver = LinearSolver::Structured;

  /// Throws InvalidInput if a tolerance is not positive or max_iterations < 1.
  void validate() const;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  /// Infinity norm of the final residual.
  double final_residual_norm = 0.0;
  /// Euclidean residual norm at the start and after every accepted step.
  std::vector<double> residual_history;
  /// Set when the smallest singular value of the final Jacobian is below
  /// 1e-8 times the largest.
  bool jacobian_rank_deficient = false;
  double smallest_singular_value = 0.0;
  double largest_singular_value = 0.0;
};

/// Solves d1(q_prev, q_cur) + d0(q_cur, q_next) = 0 for q_next by Newton's
/// method from the linear extrapolation 2 q_cur - q_prev.
Point shoot_step(const Point& q_prev, const Point& q_cur, const DiscreteLagrangian& dl,
                 const SolveConfig& cfg = {});

/// Iterates shoot_step from (q0, q1) to produce the open trajectory q_0..q_steps.
/// Failures are rethrown as ShootingError carrying the failing index.
Trajectory shoot(const Point& q0, const Point& q1, std::size_t steps, const DiscreteLagrangian& dl,
                 const SolveConfig& cfg = {});

/// Closed discrete geodesic by Levenberg-Marquardt damped Newton on the
/// cyclic Euler-Lagrange system, starting from `initial`.
///
/// Throws LeftHalfPlane if no damped step can keep every point in r > 0.
/// Running out of iterations is not an exception: the report says
/// converged = false and the best iterate is returned.
std::pair<Trajectory, SolveReport> solve_closed(const Trajectory& initial,
                                                const DiscreteLagrangian& dl,
                                                const SolveConfig& cfg = {});

/// Discrete geodesic with fixed endpoints. Endpoints may sit on the axis
/// (r = 0); interior points must satisfy r > 0.
std::pair<Trajectory, SolveReport> solve_open(const Point& q_start, const Point& q_end,
                                              const std::vector<Point>& initial_interior,
                                              const DiscreteLagrangian& dl,
                                              const SolveConfig& cfg = {});

/// Largest system dimension (2 * free points) accepted by LinearSolver::Dense.
inline constexpr std::size_t kDenseSolverMaxUnknowns = 1024;

}  // namespace angenent
