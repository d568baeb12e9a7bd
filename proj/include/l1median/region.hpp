#pragma once

// Polygonal regions with holes and exact integrals of L1 distance over them.

#include <vector>

#include "l1median/geometry.hpp"

namespace l1m {

/// Outer ring counterclockwise, holes clockwise.
struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

using Region = std::vector<Polygon>;

double region_area(const Region& region);
Moments region_moments(const Region& region);

/// Exact ∫|x - a| dA over a polygon or region (Green's theorem, edge by edge).
double integral_abs_dx(const Ring& ring, double a);
double integral_abs_dy(const Ring& ring, double b);

/// Exact ∫ L1(root, p) dA over the region.
double integral_l1(const Region& region, Point root);

/// Area of the region strictly on the low / high side of x = a (or y = b).
double area_left_of(const Region& region, double a);
double area_below_y(const Region& region, double b);

}  // namespace l1m
