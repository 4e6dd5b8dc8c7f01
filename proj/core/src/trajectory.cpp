#include "angenent/trajectory.hpp"

#include <cmath>
#include <string>

#include "angenent/errors.hpp"
#include "angenent/geometry.hpp"

namespace angenent {

Trajectory Trajectory::rotated(std::size_t shift) const {
  Trajectory out;
  out.closed = closed;
  const std::size_t n = points.size();
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.points.push_back(points[(i + shift) % n]);
  return out;
}

Trajectory Trajectory::mirrored() const {
  Trajectory out;
  out.closed = closed;
  out.points.reserve(points.size());
  for (auto it = points.rbegin(); it != points.rend(); ++it) out.points.emplace_back((*it)[0], -(*it)[1]);
  return out;
}

void validate(const Trajectory& traj) {
  const std::size_t min_points = traj.closed ? 3 : 2;
  if (traj.size() < min_points) {
    throw InvalidInput("trajectory needs at least " + std::to_string(min_points) + " points, got " +
                       std::to_string(traj.size()));
  }
  for (std::size_t k = traj.free_begin(); k < traj.free_end(); ++k) {
    const double r = traj.points[k][0];
    if (!(r > 0.0) || !std::isfinite(traj.points[k][1])) {
      throw InvalidInput("point " + std::to_string(k) + " is not in the open half-plane r > 0");
    }
  }
}

double weighted_length(const Trajectory& traj, const MetricField& metric) {
  if (traj.size() < 2) throw InvalidInput("weighted_length needs at least 2 points");
  double total = 0.0;
  for (std::size_t k = 0; k < traj.segment_count(); ++k) {
    const auto [a, b] = traj.segment(k);
    const Point mid = 0.5 * (a + b);
    total += std::sqrt(metric.value(mid)) * (b - a).norm();
  }
  return total;
}

}  // namespace angenent
