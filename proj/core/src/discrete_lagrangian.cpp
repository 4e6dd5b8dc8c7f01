#include "angenent/discrete_lagrangian.hpp"

#include <cmath>
#include <utility>

#include "angenent/errors.hpp"

namespace angenent {

DiscreteLagrangian::DiscreteLagrangian(MetricField metric, double tau)
    : metric_(std::move(metric)), tau_(tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidInput("tau must be positive and finite");
}

double DiscreteLagrangian::ld(const Point& q0, const Point& q1) const {
  const Vec2 delta = q1 - q0;
  return metric_.value(0.5 * (q0 + q1)) * delta.squaredNorm() / (2.0 * tau_);
}

Vec2 DiscreteLagrangian::d0(const Point& q0, const Point& q1) const {
  const Vec2 delta = q1 - q0;
  const MetricSample m = metric_.sample(0.5 * (q0 + q1));
  return (delta.squaredNorm() / (4.0 * tau_)) * m.gradient - (m.value / tau_) * delta;
}

Vec2 DiscreteLagrangian::d1(const Point& q0, const Point& q1) const {
  const Vec2 delta = q1 - q0;
  const MetricSample m = metric_.sample(0.5 * (q0 + q1));
  return (delta.squaredNorm() / (4.0 * tau_)) * m.gradient + (m.value / tau_) * delta;
}

HessianBlocks DiscreteLagrangian::second_derivatives(const Point& q0, const Point& q1) const {
  const Vec2 delta = q1 - q0;
  const MetricSample m = metric_.sample(0.5 * (q0 + q1));
  const double s = delta.squaredNorm();
  const Mat2 curvature = (s / (8.0 * tau_)) * m.hessian;
  const Mat2 g_delta = m.gradient * delta.transpose() / (2.0 * tau_);
  const Mat2 speed = (m.value / tau_) * Mat2::Identity();

  HessianBlocks h;
  h.d00 = curvature - g_delta - g_delta.transpose() + speed;
  h.d01 = curvature + g_delta - g_delta.transpose() - speed;
  h.d11 = curvature + g_delta + g_delta.transpose() + speed;
  return h;
}

double DiscreteLagrangian::discrete_action(const Trajectory& traj) const {
  double total = 0.0;
  for (std::size_t k = 0; k < traj.segment_count(); ++k) {
    const auto [a, b] = traj.segment(k);
    total += ld(a, b);
  }
  return total;
}

std::vector<Vec2> DiscreteLagrangian::del_residual(const Trajectory& traj) const {
  const std::size_t n = traj.size();
  std::vector<Vec2> residual;
  residual.reserve(traj.free_count());
  for (std::size_t k = traj.free_begin(); k < traj.free_end(); ++k) {
    const Point& prev = traj.points[(k + n - 1) % n];
    const Point& cur = traj.points[k];
    const Point& next = traj.points[(k + 1) % n];
    residual.push_back(d1(prev, cur) + d0(cur, next));
  }
  return residual;
}

}  // namespace angenent
