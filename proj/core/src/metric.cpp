#include "angenent/metric.hpp"

#include <cmath>
#include <utility>

#include "angenent/geometry.hpp"

namespace angenent {

double conformal_factor(const Point& p) {
  const double r = p[0], z = p[1];
  return 0.25 * r * r * std::exp(-0.5 * (r * r + z * z));
}

Vec2 conformal_factor_gradient(const Point& p) {
  const double r = p[0], z = p[1];
  const double e = 0.25 * std::exp(-0.5 * (r * r + z * z));
  return Vec2((2.0 * r - r * r * r) * e, -r * r * z * e);
}

Mat2 conformal_factor_hessian(const Point& p) {
  const double r = p[0], z = p[1];
  const double r2 = r * r;
  const double e = 0.25 * std::exp(-0.5 * (r2 + z * z));
  Mat2 h;
  h(0, 0) = (r2 * r2 - 5.0 * r2 + 2.0) * e;
  h(0, 1) = -z * (2.0 * r - r2 * r) * e;
  h(1, 0) = h(0, 1);
  h(1, 1) = -r2 * (1.0 - z * z) * e;
  return h;
}

double g_norm_sq(const Point& p, const Vec2& v) { return conformal_factor(p) * v.squaredNorm(); }

MetricField::MetricField() : MetricField(angenent()) {}

MetricField::MetricField(std::string name, Evaluator evaluator)
    : name_(std::move(name)), evaluator_(std::move(evaluator)) {}

MetricField MetricField::angenent() {
  return MetricField("angenent", [](const Point& p) {
    const double r = p[0], z = p[1];
    const double r2 = r * r;
    const double e = 0.25 * std::exp(-0.5 * (r2 + z * z));
    MetricSample s;
    s.value = r2 * e;
    s.gradient = Vec2((2.0 * r - r2 * r) * e, -r2 * z * e);
    s.hessian(0, 0) = (r2 * r2 - 5.0 * r2 + 2.0) * e;
    s.hessian(0, 1) = -z * (2.0 * r - r2 * r) * e;
    s.hessian(1, 0) = s.hessian(0, 1);
    s.hessian(1, 1) = -r2 * (1.0 - z * z) * e;
    return s;
  });
}

MetricField MetricField::flat() {
  return MetricField("flat", [](const Point&) {
    MetricSample s;
    s.value = 1.0;
    return s;
  });
}

double reference_entropy(Shape shape) {
  const double e = std::exp(1.0);
  switch (shape) {
    case Shape::Plane:
      return 1.0;
    case Shape::Sphere:
      return 4.0 / e;
    case Shape::Cylinder:
      return std::sqrt(2.0 * M_PI / e);
  }
  return 0.0;
}

}  // namespace angenent
