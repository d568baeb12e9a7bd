#pragma once

// The average-distance objective f(Z) = (1/μ) ∫_P d(Z, p) dp, its gradient,
// and local cubic representations of f on cells where it is polynomial.
//
// Values are exact up to rounding: the domain (or each shortest-path-map
// cell) is cut into triangles with a horizontal side lying in a single
// quadrant of the reference point, and each triangle contributes its area
// times the closed-form mean distance (a + b + c) / 3.

#include <memory>
#include <vector>

#include "l1median/domain.hpp"
#include "l1median/spm.hpp"

namespace l1m {

/// Mean L1 distance from A over triangle ABC, where AB is horizontal and C
/// lies in the quadrant of A that contains B. Throws kNonHorizontalBase,
/// kDegenerateTriangle or kApexOutsideQuadrant.
double triangle_average(Point a, Point b, Point c);

/// Exact ∫ L1(z, p) dp over a convex polygon.
double convex_l1_integral(const Ring& convex, Point z);

struct ObjectiveValue {
  double value = 0.0;
  Metric metric = Metric::kStraight;
};

struct Gradient {
  double fx = 0.0;
  double fy = 0.0;
};

/// Caches the per-domain work (trapezoids, and the visibility graph for the
/// geodesic metric) so f can be evaluated repeatedly. Immutable once built.
class Evaluator {
 public:
  Evaluator(const PolygonalDomain& domain, Metric metric);

  const PolygonalDomain& domain() const { return domain_; }
  Metric metric() const { return metric_; }
  /// Throws std::logic_error for the straight metric.
  const VisibilityGraph& graph() const;

  /// Throws kPointOutsideDomain.
  ObjectiveValue f(Point z) const;
  /// ((w - e) / μ, (s - n) / μ). Geodesic mode throws kDegeneratePosition
  /// at points where f is not differentiable.
  Gradient gradient(Point z) const;

 private:
  PolygonalDomain domain_;
  Metric metric_;
  std::vector<Ring> pieces_;  // convex pieces tiling the domain
  std::shared_ptr<const VisibilityGraph> graph_;
};

ObjectiveValue evaluate_f(const PolygonalDomain& domain, Point z, Metric metric);
Gradient gradient_f(const PolygonalDomain& domain, Point z, Metric metric);

/// A point deep inside a ring together with its distance to the ring.
struct InteriorCentre {
  Point point;
  double radius = 0.0;
};
InteriorCentre interior_centre(const Ring& ring);

/// True when p is inside the ring or within tol of its boundary.
bool ring_contains(const Ring& ring, Point p, double tol);

/// f restricted to one cell: ax0 + ax1 x + ax2 x² + ax3 x³ + by1 y + by2 y² + by3 y³
/// plus the mixed part cxy xy + cx2y x²y + cxy2 xy². The mixed part is zero
/// for straight-line distances and for geodesic cells away from holes; next
/// to a hole, watersheds that slide as the point moves vertically change the
/// west/east split, and f picks up xy terms.
struct CubicPair {
  double ax0 = 0.0, ax1 = 0.0, ax2 = 0.0, ax3 = 0.0;
  double by1 = 0.0, by2 = 0.0, by3 = 0.0;
  double cxy = 0.0, cx2y = 0.0, cxy2 = 0.0;

  Ring cell;
  Point centre;          // sampling centre, also the local origin
  double scale = 1.0;    // local unit length
  double f_scale = 0.0;  // f at the centre
  double residual = 0.0; // worst |fit - f| over samples and held-out points
  // Coefficients in local coordinates u = (x - centre.x) / scale, same layout.
  double lx[4] = {0, 0, 0, 0};
  double ly[4] = {0, 0, 0, 0};
  double lm[3] = {0, 0, 0};  // uv, u²v, uv²

  /// True when the mixed part is negligible against f_scale.
  bool separable() const;

  /// Throws kOutsideCell when p is not in the cell.
  double operator()(Point p) const;
  /// Evaluates without the membership check.
  double value_unchecked(Point p) const;
  /// Partial derivatives of the cubic.
  Gradient gradient(Point p) const;
};

/// Least-squares fit of f over up to 16 samples spread across the cell.
/// `residual` is near rounding level exactly when f is one cubic on the
/// cell. Throws kCellTooThin when the inradius is below 1e-7 * diameter and
/// kIllConditionedFit when the samples do not determine a cubic.
CubicPair fit_cell_cubic(const Evaluator& eval, const Ring& cell);
CubicPair fit_cell_cubic(const PolygonalDomain& domain, const Ring& cell, Metric metric);

}  // namespace l1m
