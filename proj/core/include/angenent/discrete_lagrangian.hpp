#pragma once

#include <vector>

#include "angenent/metric.hpp"
#include "angenent/trajectory.hpp"

namespace angenent {

/// The three distinct 2x2 blocks of the Hessian of L_d(q0, q1).
/// The lower-left block is d01.transpose().
struct HessianBlocks {
  Mat2 d00;
  Mat2 d01;
  Mat2 d11;
};

/// Midpoint discrete Lagrangian for the pure kinetic Lagrangian
/// L(q, v) = 1/2 |v|_g^2:
///
///   L_d(q0, q1) = tau * L((q0 + q1) / 2, (q1 - q0) / tau)
///               = phi(m) |q1 - q0|^2 / (2 tau).
///
/// All derivatives are analytic.
class DiscreteLagrangian {
 public:
  explicit DiscreteLagrangian(MetricField metric = MetricField::angenent(), double tau = 1.0);

  const MetricField& metric() const noexcept { return metric_; }
  double tau() const noexcept { return tau_; }

  double ld(const Point& q0, const Point& q1) const;

  /// Gradient with respect to q0.
  Vec2 d0(const Point& q0, const Point& q1) const;
  /// Gradient with respect to q1.
  Vec2 d1(const Point& q0, const Point& q1) const;

  HessianBlocks second_derivatives(const Point& q0, const Point& q1) const;

  /// Sum of ld over consecutive pairs, including the wrap segment when closed.
  double discrete_action(const Trajectory& traj) const;

  /// Discrete Euler-Lagrange residuals
  ///   R_k = d1(q_{k-1}, q_k) + d0(q_k, q_{k+1})
  /// at every free point (k = 1..N-1 for open, all k mod N for closed).
  /// These are the gradient of discrete_action with respect to the free points.
  std::vector<Vec2> del_residual(const Trajectory& traj) const;

 private:
  MetricField metric_;
  double tau_;
};

}  // namespace angenent
