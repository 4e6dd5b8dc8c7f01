#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "angenent/discrete_lagrangian.hpp"
#include "angenent/solvers.hpp"
#include "angenent/trajectory.hpp"

namespace angenent {

struct ScenarioResult {
  Trajectory trajectory;
  double entropy = 0.0;
  SolveReport report;
};

/// Crossings of z = 0, extreme point and radial extent of a closed curve.
struct GeometrySummary {
  /// r-values where the curve crosses z = 0, ascending.
  std::vector<double> z0_intercepts;
  /// Highest point, refined by a quadratic through the top vertex and its neighbours.
  Point max_z_point = Point::Zero();
  double min_r = 0.0;
  double max_r = 0.0;
};

/// Starting radius and (N-scaled) vertical offset of the shooting guess for
/// the Angenent torus: q0 = (3.3, -8.5/N), q1 = (3.3, 8.5/N).
inline constexpr double kAngenentStartRadius = 3.3;
inline constexpr double kAngenentStartHeight = 8.5;

/// Shoots N steps from (3.3, -8.5/N), (3.3, 8.5/N), then drops the last point
/// so that the path closes onto its start. The result is a rough closed guess.
Trajectory angenent_initial_guess(std::size_t n_points, const DiscreteLagrangian& dl,
                                  const SolveConfig& cfg = {});

/// Same shooting run without the closure: the N+1 point open path.
Trajectory angenent_shooting_path(std::size_t n_points, const DiscreteLagrangian& dl,
                                  const SolveConfig& cfg = {});

ScenarioResult solve_angenent(std::size_t n_points, const DiscreteLagrangian& dl,
                              const SolveConfig& cfg = {});

/// Sum over segments of sqrt(2 tau L_d). Identical to weighted_length with the
/// Lagrangian's metric; single-point trajectories have zero entropy.
double entropy_estimate(const Trajectory& traj, const DiscreteLagrangian& dl);

GeometrySummary geometry_summary(const Trajectory& traj);

/// Open geodesic from (0, -2) to (0, 2), started on the exact semicircle.
ScenarioResult solve_sphere(std::size_t n_points, const DiscreteLagrangian& dl,
                            const SolveConfig& cfg = {});

inline constexpr double kDefaultCylinderCut = 8.0;

/// Open geodesic from (sqrt 2, -z_cut) to (sqrt 2, z_cut), started on the
/// straight segment between them.
ScenarioResult solve_cylinder(std::size_t n_points, double z_cut, const DiscreteLagrangian& dl,
                              const SolveConfig& cfg = {});

}  // namespace angenent
