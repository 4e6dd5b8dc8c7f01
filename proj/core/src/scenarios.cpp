#include "angenent/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "angenent/errors.hpp"

namespace angenent {

namespace {

constexpr std::size_t kMinScenarioPoints = 16;

// Inverse of the error function on (-1, 1) by bisection.
double inverse_erf(double y, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (std::erf(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require_points(std::size_t n_points, const char* who) {
  if (n_points < kMinScenarioPoints) {
    throw InvalidInput(std::string(who) + ": need at least " + std::to_string(kMinScenarioPoints) +
                       " points, got " + std::to_string(n_points));
  }
}

}  // namespace

Trajectory angenent_shooting_path(std::size_t n_points, const DiscreteLagrangian& dl,
                                  const SolveConfig& cfg) {
  require_points(n_points, "angenent_shooting_path");
  const double dz = kAngenentStartHeight / static_cast<double>(n_points);
  return shoot(Point(kAngenentStartRadius, -dz), Point(kAngenentStartRadius, dz), n_points, dl, cfg);
}

Trajectory angenent_initial_guess(std::size_t n_points, const DiscreteLagrangian& dl,
                                  const SolveConfig& cfg) {
  Trajectory path = angenent_shooting_path(n_points, dl, cfg);
  // q_N is identified with q_0.
  path.points.pop_back();
  path.closed = true;
  return path;
}

ScenarioResult solve_angenent(std::size_t n_points, const DiscreteLagrangian& dl, const SolveConfig& cfg) {
  require_points(n_points, "solve_angenent");
  auto [traj, report] = solve_closed(angenent_initial_guess(n_points, dl, cfg), dl, cfg);
  ScenarioResult result;
  result.entropy = entropy_estimate(traj, dl);
  result.trajectory = std::move(traj);
  result.report = std::move(report);
  return result;
}

double entropy_estimate(const Trajectory& traj, const DiscreteLagrangian& dl) {
  double total = 0.0;
  for (std::size_t k = 0; k < traj.segment_count(); ++k) {
    const auto [a, b] = traj.segment(k);
    total += std::sqrt(2.0 * dl.tau() * dl.ld(a, b));
  }
  return total;
}

GeometrySummary geometry_summary(const Trajectory& traj) {
  if (!traj.closed || traj.size() < 3) throw InvalidInput("geometry_summary needs a closed trajectory");
  const auto& pts = traj.points;
  const std::size_t n = pts.size();

  GeometrySummary summary;
  for (std::size_t k = 0; k < n; ++k) {
    const Point& a = pts[k];
    const Point& b = pts[(k + 1) % n];
    const bool upward = a[1] < 0.0 && b[1] >= 0.0;
    const bool downward = a[1] >= 0.0 && b[1] < 0.0;
    if (upward || downward) {
      const double t = -a[1] / (b[1] - a[1]);
      summary.z0_intercepts.push_back(a[0] + t * (b[0] - a[0]));
    }
  }
  std::sort(summary.z0_intercepts.begin(), summary.z0_intercepts.end());

  std::size_t top = 0;
  summary.min_r = summary.max_r = pts[0][0];
  for (std::size_t k = 0; k < n; ++k) {
    if (pts[k][1] > pts[top][1]) top = k;
    summary.min_r = std::min(summary.min_r, pts[k][0]);
    summary.max_r = std::max(summary.max_r, pts[k][0]);
  }

  // Quadratics through (-1, q_{top-1}), (0, q_top), (1, q_{top+1}).
  const Point& before = pts[(top + n - 1) % n];
  const Point& at = pts[top];
  const Point& after = pts[(top + 1) % n];
  const Vec2 slope = 0.5 * (after - before);
  const Vec2 curve = 0.5 * (after + before) - at;
  summary.max_z_point = at;
  if (curve[1] < 0.0) {
    const double t = std::clamp(-slope[1] / (2.0 * curve[1]), -1.0, 1.0);
    summary.max_z_point = at + t * slope + t * t * curve;
  }
  return summary;
}

ScenarioResult solve_sphere(std::size_t n_points, const DiscreteLagrangian& dl, const SolveConfig& cfg) {
  require_points(n_points, "solve_sphere");
  constexpr double radius = 2.0;
  std::vector<Point> interior;
  interior.reserve(n_points - 1);
  for (std::size_t k = 1; k < n_points; ++k) {
    // Equal g-arclength: the g-length from the south pole is (2/e)(1 - cos theta).
    const double theta = std::acos(1.0 - 2.0 * static_cast<double>(k) / static_cast<double>(n_points));
    interior.emplace_back(radius * std::sin(theta), -radius * std::cos(theta));
  }
  auto [traj, report] = solve_open(Point(0.0, -radius), Point(0.0, radius), interior, dl, cfg);
  ScenarioResult result;
  result.entropy = entropy_estimate(traj, dl);
  result.trajectory = std::move(traj);
  result.report = std::move(report);
  return result;
}

ScenarioResult solve_cylinder(std::size_t n_points, double z_cut, const DiscreteLagrangian& dl,
                              const SolveConfig& cfg) {
  require_points(n_points, "solve_cylinder");
  if (!(z_cut > 0.0) || !std::isfinite(z_cut)) throw InvalidInput("solve_cylinder: z_cut must be positive");
  const double radius = std::sqrt(2.0);
  std::vector<Point> interior;
  interior.reserve(n_points - 1);
  // Equal g-arclength along the segment: the g-length below height z is
  // proportional to erf(z / 2).
  const double total = std::erf(0.5 * z_cut);
  for (std::size_t k = 1; k < n_points; ++k) {
    const double fraction = 2.0 * static_cast<double>(k) / static_cast<double>(n_points) - 1.0;
    interior.emplace_back(radius, 2.0 * inverse_erf(total * fraction, -0.5 * z_cut, 0.5 * z_cut));
  }
  auto [traj, report] = solve_open(Point(radius, -z_cut), Point(radius, z_cut), interior, dl, cfg);
  ScenarioResult result;
  result.entropy = entropy_estimate(traj, dl);
  result.trajectory = std::move(traj);
  result.report = std::move(report);
  return result;
}

}  // namespace angenent
