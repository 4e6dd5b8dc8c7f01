#pragma once

#include "angenent/metric.hpp"
#include "angenent/trajectory.hpp"

namespace angenent {

/// g-length of a polyline, sum over segments of sqrt(phi(midpoint)) times the
/// Euclidean segment length. With the Angenent metric this is the reduced
/// Gaussian-weighted area, i.e. the entropy of the surface of revolution.
///
/// Throws InvalidInput for fewer than 2 points.
double weighted_length(const Trajectory& traj, const MetricField& metric = MetricField::angenent());

enum class Shape { Plane, Sphere, Cylinder };

/// Closed-form entropy of the plane (1), the sphere (4/e) and the
/// cylinder (sqrt(2 pi / e)).
double reference_entropy(Shape shape);

}  // namespace angenent
