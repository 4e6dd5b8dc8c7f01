#pragma once

#include <functional>
#include <string>

#include "angenent/point.hpp"

namespace angenent {

/// Value, gradient and Hessian of a conformal factor at one point.
struct MetricSample {
  double value = 0.0;
  Vec2 gradient = Vec2::Zero();
  Mat2 hessian = Mat2::Zero();
};

/// A conformal metric phi(r, z) (dr^2 + dz^2) on the half-plane, given by a
/// twice-differentiable scalar field with analytic derivatives.
///
/// The default-constructed field is the Angenent metric
///   phi(r, z) = 1/4 r^2 exp(-(r^2 + z^2) / 2),
/// whose geodesics are cross-sections of rotationally symmetric
/// self-shrinkers. Other fields (e.g. the flat metric phi = 1) can be plugged
/// in for testing.
class MetricField {
 public:
  using Evaluator = std::function<MetricSample(const Point&)>;

  MetricField();
  MetricField(std::string name, Evaluator evaluator);

  MetricSample sample(const Point& p) const { return evaluator_(p); }
  double value(const Point& p) const { return evaluator_(p).value; }
  Vec2 gradient(const Point& p) const { return evaluator_(p).gradient; }

  /// Squared g-norm phi(p) |v|^2 of a tangent vector v at p.
  double norm_sq(const Point& p, const Vec2& v) const { return value(p) * v.squaredNorm(); }

  const std::string& name() const noexcept { return name_; }

  static MetricField angenent();
  static MetricField flat();

 private:
  std::string name_;
  Evaluator evaluator_;
};

double conformal_factor(const Point& p);
Vec2 conformal_factor_gradient(const Point& p);
Mat2 conformal_factor_hessian(const Point& p);

/// Squared norm of v with respect to the Angenent metric at p.
double g_norm_sq(const Point& p, const Vec2& v);

}  // namespace angenent
