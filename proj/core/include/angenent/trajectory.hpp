#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "angenent/point.hpp"

namespace angenent {

/// A discrete curve q_0, ..., q_N in the half-plane.
///
/// Open trajectories store both endpoints. Closed trajectories store N points
/// and close implicitly: the last point connects back to the first, so the
/// first point is never repeated.
struct Trajectory {
  std::vector<Point> points;
  bool closed = false;

  Trajectory() = default;
  Trajectory(std::vector<Point> pts, bool is_closed) : points(std::move(pts)), closed(is_closed) {}

  std::size_t size() const noexcept { return points.size(); }

  /// Number of segments, including the wrap-around segment when closed.
  std::size_t segment_count() const noexcept {
    if (points.size() < 2) return 0;
    return closed ? points.size() : points.size() - 1;
  }

  /// Endpoints of segment k: (q_k, q_{k+1}), indices taken mod size() when closed.
  std::pair<const Point&, const Point&> segment(std::size_t k) const {
    return {points[k], points[(k + 1) % points.size()]};
  }

  /// Indices of points that are unknowns of the Euler-Lagrange system:
  /// every point when closed, every point but the endpoints when open.
  std::size_t free_begin() const noexcept { return closed ? 0 : 1; }
  std::size_t free_end() const noexcept { return closed ? points.size() : points.size() - 1; }
  std::size_t free_count() const noexcept { return free_end() - free_begin(); }

  /// Cyclic rotation by `shift` (closed only): new point i is old point i + shift.
  Trajectory rotated(std::size_t shift) const;

  /// Reverses traversal order and negates every z coordinate.
  Trajectory mirrored() const;
};

/// Throws InvalidInput unless the trajectory has at least 3 points (closed)
/// or 2 points (open) and every free point has r > 0.
void validate(const Trajectory& traj);

}  // namespace angenent
