#pragma once

// Exact minimizer of the average straight-line L1 distance over a domain
// with holes. f is separable and convex, so the L1 origin (simultaneous
// area medians in x and y) is optimal whenever it is feasible; otherwise the
// optimum lies on the boundary, where f is piecewise cubic along edges cut
// at every vertex coordinate.

#include <vector>

#include "l1median/candidate.hpp"
#include "l1median/domain.hpp"

namespace l1m {

struct L1Origin {
  Point point;
  bool feasible = false;
};

L1Origin l1_origin(const PolygonalDomain& domain);

/// A piece of boundary edge `edge` between parameters t0 <= t1. Pieces with
/// t0 == t1 stand for a single point.
struct BoundaryPiece {
  int edge = -1;
  double t0 = 0.0;
  double t1 = 1.0;
  Point a;
  Point b;
};

/// Boundary edges cut at every vertex x and y coordinate and at the lines
/// through the origin.
std::vector<BoundaryPiece> boundary_pieces(const PolygonalDomain& domain, Point origin);

/// Drops boundary pieces all of whose points are dominated: p1 dominates p2
/// when p1 lies in the axis-parallel rectangle spanned by the origin and p2,
/// and then f(p1) <= f(p2). A piece moving away from the origin in both
/// coordinates shrinks to its near endpoint. The survivors always contain a
/// global optimum.
std::vector<BoundaryPiece> dominated_boundary(const PolygonalDomain& domain, const L1Origin& origin);

struct StraightOptions {
  bool prune = true;  // apply dominated_boundary before solving
};

SolveResult solve_straight(const PolygonalDomain& domain, const StraightOptions& options = {});

}  // namespace l1m
