#pragma once

// Geodesic L1 median of a simple polygon. Each coordinate comes from the
// trapezoid that is a weighted median of the (tree-shaped) trapezoid
// adjacency graph, followed by one quadratic solve inside that trapezoid.
// The resulting point is always feasible and is the unique optimum.

#include <cstddef>
#include <vector>

#include "l1median/candidate.hpp"
#include "l1median/domain.hpp"
#include "l1median/trapezoid.hpp"

namespace l1m {

/// Trapezoid whose removal leaves no component of area above half the total.
/// Throws kNotATree when the adjacency graph has a cycle or is disconnected.
std::size_t tree_median(const Trapezoidization& trap);

struct MedianChord {
  Axis axis = Axis::kVertical;
  double coordinate = 0.0;
  std::size_t trapezoid = 0;
  bool on_wall = false;  // the chord is a wall of `trapezoid`
  double area_low = 0.0;  // area on the low side of the chord
  double area_high = 0.0;
};

/// Throws kHasHoles.
MedianChord median_chord(const PolygonalDomain& domain, Axis axis);

/// Throws kHasHoles.
SolveResult solve_simple(const PolygonalDomain& domain);

}  // namespace l1m
