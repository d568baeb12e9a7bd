#pragma once

// Planar subdivision on whose faces the geodesic objective is a single
// cubic pair: watershed bisectors of every vertex-rooted shortest-path map,
// the axis-parallel lines through every vertex (clipped to the domain), and
// the domain boundary.

#include <cstddef>
#include <vector>

#include "l1median/domain.hpp"
#include "l1median/spm.hpp"

namespace l1m {

enum class SegmentSource { kBoundary, kWall, kWatershed, kExtra };

struct OverlaySegment {
  Point a;
  Point b;
  SegmentSource source = SegmentSource::kBoundary;
};

struct OverlaySubdivision {
  std::vector<OverlaySegment> segments;  // input segments
  std::vector<Point> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<Ring> faces;  // bounded faces inside the domain, counterclockwise
  std::size_t hole_faces = 0;    // bounded faces covering a hole
  std::size_t outer_cycles = 0;  // clockwise boundary cycles of the unbounded face

  /// Total count of faces, edges and vertices.
  std::size_t complexity() const { return vertices.size() + edges.size() + faces.size(); }
};

struct OverlayOptions {
  bool walls = true;
  std::vector<Segment> extra;  // additional segments, e.g. for refinement tests
};

/// Throws kDegenerateBisector when a watershed chain is not made of
/// horizontal, vertical and diagonal pieces.
OverlaySubdivision build_overlay(const VisibilityGraph& graph, const OverlayOptions& options = {});
OverlaySubdivision build_overlay(const PolygonalDomain& domain, const OverlayOptions& options = {});

/// Watershed chains of SPM(v) for every vertex v, as segments.
std::vector<Segment> watershed_segments(const VisibilityGraph& graph);

/// Parts of the axis-parallel line through `value` that lie in the domain.
std::vector<Segment> domain_chords(const PolygonalDomain& domain, Axis axis, double value);

}  // namespace l1m
