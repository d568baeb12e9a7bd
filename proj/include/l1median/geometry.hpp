#pragma once

// Planar primitives shared by every module: points, orientation tests,
// segment intersection, convex clipping and polygon moments.

#include <cmath>
#include <optional>
#include <vector>

namespace l1m {

inline constexpr double kEpsGeom = 1e-9;
inline constexpr double kCoordLimit = 1e6;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point&, const Point&) = default;
};

using Ring = std::vector<Point>;

enum class Axis { kVertical, kHorizontal };

enum class Metric { kStraight, kGeodesic };

inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }
inline double l1_distance(Point a, Point b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}
inline double euclid(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline bool near(Point a, Point b, double eps = kEpsGeom) {
  return std::abs(a.x - b.x) <= eps && std::abs(a.y - b.y) <= eps;
}

/// Swaps the roles of x and y. Used to run vertical sweeps horizontally.
inline Point transpose(Point p) { return {p.y, p.x}; }

double signed_area(const Ring& ring);

/// Distance from p to the closed segment ab (Euclidean).
double point_segment_distance(Point p, Point a, Point b);

/// Parameter along ab of the closest point to p, clamped to [0, 1].
double project_parameter(Point p, Point a, Point b);

/// True when the closed segments ab and cd share a point (tolerant).
bool segments_touch(Point a, Point b, Point c, Point d, double eps = kEpsGeom);

/// True when ab and cd cross at a single point interior to both.
bool segments_cross_properly(Point a, Point b, Point c, Point d, double eps = kEpsGeom);

/// Intersection of the supporting lines, or nullopt for (near) parallel lines.
std::optional<Point> line_intersection(Point a, Point b, Point c, Point d);

/// Area-weighted first moments of a ring: returns {area, ∫x, ∫y} with sign
/// following the ring orientation.
struct Moments {
  double area = 0.0;
  double mx = 0.0;
  double my = 0.0;

  Moments& operator+=(const Moments& o) {
    area += o.area;
    mx += o.mx;
    my += o.my;
    return *this;
  }
};
Moments ring_moments(const Ring& ring);

/// A half-plane {p : a·x + b·y + c >= 0}.
struct HalfPlane {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double eval(Point p) const { return a * p.x + b * p.y + c; }
};

/// Even-odd point-in-ring test; points on the boundary may go either way.
bool point_in_ring(const Ring& ring, Point p);

/// Sutherland-Hodgman clip of a convex polygon against one half-plane.
Ring clip_convex(const Ring& poly, const HalfPlane& h);

/// Drops repeated and collinear vertices; returns an empty ring if the
/// result has (numerically) no area.
Ring tidy_convex(const Ring& poly, double eps = 1e-12);

}  // namespace l1m
