#pragma once

// Validated polygonal domains: an outer ring (counterclockwise) with
// clockwise hole rings. The interior of the domain is always to the left of
// each directed boundary edge.

#include <cstddef>
#include <span>
#include <vector>

#include "l1median/error.hpp"
#include "l1median/geometry.hpp"

namespace l1m {

struct VertexRef {
  int ring = 0;
  int index = 0;
};

struct Edge {
  Point a;
  Point b;
  int ring = 0;
  int id = 0;  // global edge id; edge i starts at global vertex i
};

class PolygonalDomain {
 public:
  PolygonalDomain() = default;

  const Ring& outer() const { return rings_.front(); }
  std::span<const Ring> holes() const { return {rings_.data() + 1, rings_.size() - 1}; }
  const std::vector<Ring>& rings() const { return rings_; }
  bool has_holes() const { return rings_.size() > 1; }

  /// Total vertex count over all rings.
  std::size_t size() const { return vertices_.size(); }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  VertexRef vertex_ref(std::size_t v) const { return refs_[v]; }
  std::size_t prev_vertex(std::size_t v) const { return prev_[v]; }
  std::size_t next_vertex(std::size_t v) const { return next_[v]; }

  double area() const { return area_; }
  /// Euclidean diagonal of the bounding box.
  double diameter() const { return diameter_; }
  double min_x() const { return lo_.x; }
  double min_y() const { return lo_.y; }
  double max_x() const { return hi_.x; }
  double max_y() const { return hi_.y; }

 private:
  friend PolygonalDomain validate_domain(const std::vector<Ring>& rings);
  void index();

  std::vector<Ring> rings_;
  std::vector<Point> vertices_;
  std::vector<VertexRef> refs_;
  std::vector<std::size_t> prev_;
  std::vector<std::size_t> next_;
  std::vector<Edge> edges_;
  double area_ = 0.0;
  double diameter_ = 0.0;
  Point lo_;
  Point hi_;
};

/// Validates rings (first = outer boundary) and normalizes orientation.
/// Throws Error with kSelfIntersection, kHoleOutsideOuter, kHolesOverlap or
/// kDegenerateRing naming the offending ring.
PolygonalDomain validate_domain(const std::vector<Ring>& rings);

double area(const PolygonalDomain& domain);

enum class Location { kInterior, kBoundary, kExterior };

/// Point classification with a boundary band of 1e-9 * diameter.
Location locate(const PolygonalDomain& domain, Point p);

inline bool contains(const PolygonalDomain& domain, Point p) {
  return locate(domain, p) != Location::kExterior;
}

/// Distance from p to the nearest boundary edge.
double boundary_distance(const PolygonalDomain& domain, Point p);

struct CriticalVertex {
  std::size_t vertex = 0;
  Point point;
  bool x_min = false;
  bool x_max = false;
  bool y_min = false;
  bool y_max = false;

  bool x_extremal() const { return x_min || x_max; }
  bool y_extremal() const { return y_min || y_max; }
};

/// Reflex vertices that are locally extremal in x or y. A vertex counts as
/// locally extremal when neither neighbour is strictly more extreme, so
/// rectilinear corners with an axis-parallel incident edge qualify.
std::vector<CriticalVertex> critical_vertices(const PolygonalDomain& domain);

bool is_reflex(const PolygonalDomain& domain, std::size_t v);

/// True when the closed segment ab lies in the (closed) domain.
bool segment_in_domain(const PolygonalDomain& domain, Point a, Point b);

/// Pairs of vertices lying on a common line of slope +1 or -1.
std::vector<std::pair<std::size_t, std::size_t>> diagonal_alignments(
    const PolygonalDomain& domain, double eps = kEpsGeom);

/// Moves every vertex by a deterministic pseudo-random offset of magnitude
/// up to `scale` until no diagonal alignments remain, then re-validates.
PolygonalDomain perturb_domain(const PolygonalDomain& domain, double scale);

}  // namespace l1m
