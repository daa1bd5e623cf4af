#pragma once

#include "rfis/complex.hpp"

namespace rfis {

enum class Location { kInside, kOutside, kOnBoundary };

struct RayHit {
  Location location;
  int simplex;          ///< boundary simplex pierced by the ray (-1 at center)
  double pierce_distance;  ///< distance from the center to the boundary
  double radial_excess;    ///< |x - center| - pierce_distance
};

/// Classifies `x` against the star-shaped polytope bounded by `c` by casting
/// a ray from the center through `x`. `hint` is tried first (pass the
/// previous hit when classifying a trajectory). Throws kNoIntersection when
/// no simplex is pierced, which means the complex is not star-shaped.
RayHit locate(const Point& x, const BoundaryComplex& c, int hint = -1,
              double tol = 1e-9);

inline Location containment(const Point& x, const BoundaryComplex& c) {
  return locate(x, c).location;
}

}  // namespace rfis
