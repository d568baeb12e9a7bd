#pragma once

// L1 geodesic distances and shortest-path maps.
//
// Distances come from Dijkstra over the visibility graph of the domain
// vertices with L1 edge weights; some shortest L1 path always turns only at
// vertices, so this is exact. A shortest-path map SPM(Z) assigns every point
// p to the last vertex (its root) of a shortest path from Z, or to Z itself.
// Ties between roots u and v go to the root nearer to p in L1, then to the
// lower root id (the source has id -1).

#include <cstdint>
#include <memory>
#include <vector>

#include "l1median/domain.hpp"
#include "l1median/region.hpp"

namespace l1m {

inline constexpr int kSourceRoot = -1;

/// Per-domain precomputation shared by every geodesic query: the vertex
/// visibility graph and the visibility polygon of every vertex. Immutable
/// after construction.
class VisibilityGraph {
 public:
  explicit VisibilityGraph(const PolygonalDomain& domain);
  ~VisibilityGraph();
  VisibilityGraph(VisibilityGraph&&) noexcept;
  VisibilityGraph& operator=(VisibilityGraph&&) noexcept;

  const PolygonalDomain& domain() const { return domain_; }
  bool visible(std::size_t u, std::size_t v) const { return vis_[u * n_ + v] != 0; }
  /// Vertices visible from an arbitrary point of the domain.
  std::vector<std::size_t> visible_from(Point p) const;
  /// Vertex index when p coincides with a vertex, else -1.
  int vertex_at(Point p) const;

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  PolygonalDomain domain_;
  std::size_t n_ = 0;
  std::vector<std::uint8_t> vis_;
  std::unique_ptr<Impl> impl_;
};

/// Bits recording the first axis move of shortest paths from the source.
enum FirstMove : std::uint8_t {
  kMoveNeg = 1,      // west (x) or south (y)
  kMovePos = 2,      // east or north
  kMoveAligned = 4,  // no move along this axis yet
};

struct GeodesicLabeling {
  Point source;
  std::vector<double> dist;
  std::vector<int> pred;  // kSourceRoot or a vertex index
  std::vector<std::uint8_t> source_visible;
  std::vector<std::uint8_t> first_x;  // FirstMove bits over all shortest paths
  std::vector<std::uint8_t> first_y;
};

GeodesicLabeling label_vertices(const VisibilityGraph& graph, Point source);

/// d_G(a, b). Throws kPointOutsideDomain if either point is exterior.
double geodesic_distance(const VisibilityGraph& graph, Point a, Point b);
double geodesic_distance(const PolygonalDomain& domain, Point a, Point b);

/// d_G(source, p) from precomputed labels.
double distance_from_labels(const VisibilityGraph& graph, const GeodesicLabeling& labels, Point p);

/// Root owning p under the tie rule, with the resulting distance.
struct RootChoice {
  int root = kSourceRoot;
  double dist = 0.0;
};
RootChoice best_root(const VisibilityGraph& graph, const GeodesicLabeling& labels, Point p);

enum class BisectorKind { kCrossable, kWatershed };

struct Bisector {
  int root_a = kSourceRoot;
  int root_b = kSourceRoot;
  std::vector<Point> chain;
  BisectorKind kind = BisectorKind::kCrossable;
};

struct SpmCell {
  int root = kSourceRoot;
  Point root_point;
  double root_dist = 0.0;
  Region region;  // empty for vertices whose cell is empty
  double area = 0.0;
};

struct Segment {
  Point a;
  Point b;
};

struct ShortestPathMap {
  Point source;
  GeodesicLabeling labels;
  std::vector<SpmCell> cells;  // cells[0] is the source cell, cells[v + 1] vertex v
  std::vector<Bisector> bisectors;
  std::vector<Segment> quadrant_chords;  // axis chords through the source
  bool classified = false;

  const SpmCell& source_cell() const { return cells.front(); }
  const SpmCell& vertex_cell(std::size_t v) const { return cells[v + 1]; }
  double total_area() const;
};

enum class SpmDetail {
  kFull,   // cells, quadrant chords and bisector chains
  kCells,  // cells only; enough for integrating over the map
};

/// Builds SPM(source). Bisectors are extracted but not yet classified.
/// Throws kPointOutsideDomain.
ShortestPathMap build_spm(const VisibilityGraph& graph, Point source,
                          SpmDetail detail = SpmDetail::kFull);

/// Tags bisector pieces as watersheds when stepping off them by
/// 1e-6 * diameter strictly decreases the distance on both sides. Chains are
/// split into maximal runs of one kind.
ShortestPathMap classify_watersheds(ShortestPathMap spm, const VisibilityGraph& graph);

struct CardinalAreas {
  double w = 0.0;
  double e = 0.0;
  double n = 0.0;
  double s = 0.0;
};

/// Areas of the points whose shortest paths from z head west/east/north/south
/// first. Geodesic mode throws kDegeneratePosition when z shares a coordinate
/// with a critical vertex or lies on a watershed of some vertex-rooted SPM.
CardinalAreas cardinal_areas(const VisibilityGraph& graph, Point z, Metric metric);

/// Same as above using an already built SPM(z).
CardinalAreas cardinal_areas(const VisibilityGraph& graph, const ShortestPathMap& spm);

/// Throws kDegeneratePosition if z violates the differentiability hypotheses.
void check_regular_position(const VisibilityGraph& graph, const GeodesicLabeling& labels);

}  // namespace l1m
