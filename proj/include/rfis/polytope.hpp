#pragma once

#include <vector>

#include "rfis/complex.hpp"

namespace rfis {

/// Boundary triangulation of conv(vertices). Facets are found by exhaustive
/// supporting-hyperplane search and each face is fan-triangulated from its
/// lowest-index vertex, recursively, so shared faces triangulate identically
/// from both sides. Vertices not at a hull corner are dropped; the remaining
/// ones keep their relative order.
///
/// Throws kDegenerateInput when the hull is lower-dimensional and
/// kCenterOutside when `center` is not strictly inside it.
BoundaryComplex triangulate_convex_polytope(const std::vector<Point>& vertices,
                                            const Point& center);

/// The 2^n corners of the axis-aligned box [lower, upper].
std::vector<Point> box_corners(const Point& lower, const Point& upper);

/// k points evenly spaced on a circle of `radius` about `center` (n = 2).
std::vector<Point> regular_polygon(const Point& center, double radius, int k);

}  // namespace rfis
