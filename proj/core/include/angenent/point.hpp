#pragma once

#include <Eigen/Core>

namespace angenent {

/// A position in the (r, z) half-plane. Component 0 is r, component 1 is z.
using Point = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline Point make_point(double r, double z) { return Point(r, z); }

}  // namespace angenent
