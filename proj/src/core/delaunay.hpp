#pragma once

#include <array>
#include <utility>
#include <vector>

#include "common.hpp"

namespace isopar::mesh::detail {

// Constrained Delaunay triangulation of a closed polygon plus interior points.
// Incremental Lawson insertion, constraint recovery by edge flips, and removal
// of everything outside the constraint loop.
struct CdtResult {
  std::vector<std::array<int, 3>> triangles;  // counterclockwise, indices into the input points
};

// `points[0 .. loop_size)` form the closed boundary loop in counterclockwise
// order; the remaining points are strictly interior.
CdtResult constrained_delaunay(const std::vector<Vec2>& points, int loop_size);

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c);
// Positive when d lies inside the circumcircle of the counterclockwise triangle abc.
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

}  // namespace isopar::mesh::detail
