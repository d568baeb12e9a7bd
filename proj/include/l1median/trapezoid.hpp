#pragma once

#include <cstddef>
#include <vector>

#include "l1median/domain.hpp"

namespace l1m {

/// A wall-bounded trapezoid expressed in sweep coordinates: `s` runs along
/// the sweep axis (x for vertical walls, y for horizontal walls) and `t`
/// across it. Triangles appear with top == bottom at one wall.
struct Trapezoid {
  double lo = 0.0;      // sweep coordinate of the first wall
  double hi = 0.0;      // sweep coordinate of the second wall
  double bot_lo = 0.0;  // bottom edge height at lo
  double bot_hi = 0.0;
  double top_lo = 0.0;
  double top_hi = 0.0;
  int bottom_edge = -1;
  int top_edge = -1;
  double area = 0.0;
  Ring polygon;  // counterclockwise, original coordinates

  double bottom_at(double s) const;
  double top_at(double s) const;
  /// Length of the wall chord at sweep coordinate s.
  double width_at(double s) const { return top_at(s) - bottom_at(s); }
  /// Area of the part with sweep coordinate below s (quadratic in s).
  double area_before(double s) const;
};

struct Trapezoidization {
  Axis axis = Axis::kVertical;
  std::vector<Trapezoid> trapezoids;
  /// Undirected adjacency over trapezoids sharing a wall of positive length.
  std::vector<std::pair<std::size_t, std::size_t>> adjacency;

  std::vector<std::vector<std::size_t>> neighbours() const;
  double total_area() const;
};

/// Decomposition by axis-parallel chords through every vertex.
Trapezoidization trapezoidize(const PolygonalDomain& domain, Axis axis);

/// Area of the domain on the low side of the axis-parallel line at `s`
/// (x for kVertical, y for kHorizontal). Monotone, piecewise quadratic.
double area_below(const Trapezoidization& trap, double s);

/// The coordinate where area_below reaches `target`, solved exactly inside
/// the slab that contains it.
double area_quantile(const Trapezoidization& trap, double target);

}  // namespace l1m
