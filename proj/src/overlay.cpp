#include "l1median/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "l1median/objective.hpp"

namespace l1m {

namespace {

double tol_of(const PolygonalDomain& d) { return 1e-9 * std::max(1.0, d.diameter()); }

// Merges points closer than tol (per coordinate) into one vertex.
class VertexPool {
 public:
  explicit VertexPool(double tol) : tol_(tol), cell_(4.0 * tol) {}

  std::size_t id(Point p) {
    const long long gx = static_cast<long long>(std::floor(p.x / cell_));
    const long long gy = static_cast<long long>(std::floor(p.y / cell_));
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = grid_.find({gx + dx, gy + dy});
        if (it == grid_.end()) continue;
        for (std::size_t v : it->second) {
          if (near(points_[v], p, tol_)) return v;
        }
      }
    }
    points_.push_back(p);
    grid_[{gx, gy}].push_back(points_.size() - 1);
    return points_.size() - 1;
  }

  std::vector<Point> take() { return std::move(points_); }

 private:
  double tol_;
  double cell_;
  std::vector<Point> points_;
  std::map<std::pair<long long, long long>, std::vector<std::size_t>> grid_;
};

bool boxes_overlap(const OverlaySegment& s, const OverlaySegment& t, double tol) {
  return std::min(s.a.x, s.b.x) <= std::max(t.a.x, t.b.x) + tol &&
         std::min(t.a.x, t.b.x) <= std::max(s.a.x, s.b.x) + tol &&
         std::min(s.a.y, s.b.y) <= std::max(t.a.y, t.b.y) + tol &&
         std::min(t.a.y, t.b.y) <= std::max(s.a.y, s.b.y) + tol;
}

// Adds to ts / us the parameters where segments s and t meet.
void intersect(const OverlaySegment& s, const OverlaySegment& t, double tol, std::vector<double>& ts,
               std::vector<double>& us) {
  const Point d1 = s.b - s.a;
  const Point d2 = t.b - t.a;
  const double l1 = std::hypot(d1.x, d1.y);
  const double l2 = std::hypot(d2.x, d2.y);
  const double den = cross(d1, d2);
  if (std::abs(den) > 1e-12 * l1 * l2) {
    const double a = cross(t.a - s.a, d2) / den;
    const double b = cross(t.a - s.a, d1) / den;
    const double ea = tol / l1;
    const double eb = tol / l2;
    if (a < -ea || a > 1.0 + ea || b < -eb || b > 1.0 + eb) return;
    ts.push_back(std::clamp(a, 0.0, 1.0));
    us.push_back(std::clamp(b, 0.0, 1.0));
    return;
  }
  // Parallel: only collinear overlaps matter; endpoints of each split the other.
  if (point_segment_distance(t.a, s.a, s.b) > tol && point_segment_distance(t.b, s.a, s.b) > tol &&
      point_segment_distance(s.a, t.a, t.b) > tol && point_segment_distance(s.b, t.a, t.b) > tol) {
    return;
  }
  for (Point p : {t.a, t.b}) {
    if (point_segment_distance(p, s.a, s.b) <= tol) ts.push_back(project_parameter(p, s.a, s.b));
  }
  for (Point p : {s.a, s.b}) {
    if (point_segment_distance(p, t.a, t.b) <= tol) us.push_back(project_parameter(p, t.a, t.b));
  }
}

void check_chain_piece(Point a, Point b) {
  const double dx = std::abs(b.x - a.x);
  const double dy = std::abs(b.y - a.y);
  const double len = std::max(dx, dy);
  const double slack = 1e-6 * len;
  if (dx <= slack || dy <= slack || std::abs(dx - dy) <= slack) return;
  throw Error(ErrorCode::kDegenerateBisector, "watershed piece is neither axis-parallel nor diagonal");
}

}  // namespace

std::vector<Segment> domain_chords(const PolygonalDomain& domain, Axis axis, double value) {
  const bool vertical = axis == Axis::kVertical;
  auto along = [&](Point p) { return vertical ? p.y : p.x; };
  auto across = [&](Point p) { return vertical ? p.x : p.y; };
  auto at = [&](double s) { return vertical ? Point{value, s} : Point{s, value}; };
  const double tol = tol_of(domain);
  std::vector<double> hits;
  for (const Edge& e : domain.edges()) {
    const double ca = across(e.a) - value;
    const double cb = across(e.b) - value;
    if (ca * cb > 0.0) continue;
    if (ca == cb) {
      hits.push_back(along(e.a));
      hits.push_back(along(e.b));
    } else {
      hits.push_back(along(e.a) + (along(e.b) - along(e.a)) * ca / (ca - cb));
    }
  }
  std::sort(hits.begin(), hits.end());
  std::vector<Segment> out;
  bool open = false;
  for (std::size_t i = 0; i + 1 < hits.size(); ++i) {
    if (hits[i + 1] - hits[i] <= tol) continue;
    const bool inside = locate(domain, at(0.5 * (hits[i] + hits[i + 1]))) == Location::kInterior;
    if (inside && open) {
      out.back().b = at(hits[i + 1]);
    } else if (inside) {
      out.push_back({at(hits[i]), at(hits[i + 1])});
    }
    open = inside;
  }
  return out;
}

std::vector<Segment> watershed_segments(const VisibilityGraph& graph) {
  std::vector<Segment> out;
  for (const Point& v : graph.domain().vertices()) {
    const ShortestPathMap spm = classify_watersheds(build_spm(graph, v), graph);
    for (const Bisector& b : spm.bisectors) {
      if (b.kind != BisectorKind::kWatershed) continue;
      for (std::size_t i = 0; i + 1 < b.chain.size(); ++i) {
        check_chain_piece(b.chain[i], b.chain[i + 1]);
        out.push_back({b.chain[i], b.chain[i + 1]});
      }
    }
  }
  return out;
}

OverlaySubdivision build_overlay(const VisibilityGraph& graph, const OverlayOptions& options) {
  const PolygonalDomain& d = graph.domain();
  const double tol = tol_of(d);
  OverlaySubdivision out;
  for (const Edge& e : d.edges()) out.segments.push_back({e.a, e.b, SegmentSource::kBoundary});
  if (options.walls) {
    std::set<double> xs;
    std::set<double> ys;
    for (const Point& v : d.vertices()) {
      xs.insert(v.x);
      ys.insert(v.y);
    }
    for (double x : xs) {
      for (const Segment& s : domain_chords(d, Axis::kVertical, x)) {
        out.segments.push_back({s.a, s.b, SegmentSource::kWall});
      }
    }
    for (double y : ys) {
      for (const Segment& s : domain_chords(d, Axis::kHorizontal, y)) {
        out.segments.push_back({s.a, s.b, SegmentSource::kWall});
      }
    }
  }
  for (const Segment& s : watershed_segments(graph)) {
    out.segments.push_back({s.a, s.b, SegmentSource::kWatershed});
  }
  for (const Segment& s : options.extra) out.segments.push_back({s.a, s.b, SegmentSource::kExtra});
  std::erase_if(out.segments, [&](const OverlaySegment& s) { return euclid(s.a, s.b) <= tol; });

  // Split every segment at its meetings with the others.
  const std::size_t m = out.segments.size();
  std::vector<std::vector<double>> params(m, std::vector<double>{0.0, 1.0});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!boxes_overlap(out.segments[i], out.segments[j], tol)) continue;
      intersect(out.segments[i], out.segments[j], tol, params[i], params[j]);
    }
  }
  VertexPool pool(tol);
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < m; ++i) {
    const OverlaySegment& s = out.segments[i];
    std::sort(params[i].begin(), params[i].end());
    std::size_t prev = pool.id(s.a);
    for (double t : params[i]) {
      const std::size_t v = t >= 1.0 ? pool.id(s.b) : pool.id(s.a + t * (s.b - s.a));
      if (v != prev) edges.insert({std::min(prev, v), std::max(prev, v)});
      prev = v;
    }
  }
  out.vertices = pool.take();
  out.edges.assign(edges.begin(), edges.end());

  // Faces: walk half-edges keeping the face on the left.
  const std::size_t nv = out.vertices.size();
  const std::size_t nh = 2 * out.edges.size();
  std::vector<std::size_t> origin(nh);
  std::vector<std::size_t> target(nh);
  std::vector<std::vector<std::size_t>> around(nv);
  for (std::size_t e = 0; e < out.edges.size(); ++e) {
    const auto [u, v] = out.edges[e];
    origin[2 * e] = u;
    target[2 * e] = v;
    origin[2 * e + 1] = v;
    target[2 * e + 1] = u;
    around[u].push_back(2 * e);
    around[v].push_back(2 * e + 1);
  }
  std::vector<std::size_t> slot(nh);
  for (std::size_t v = 0; v < nv; ++v) {
    auto angle = [&](std::size_t h) {
      const Point dd = out.vertices[target[h]] - out.vertices[v];
      return std::atan2(dd.y, dd.x);
    };
    std::sort(around[v].begin(), around[v].end(),
              [&](std::size_t a, std::size_t b) { return angle(a) < angle(b); });
    for (std::size_t k = 0; k < around[v].size(); ++k) slot[around[v][k]] = k;
  }
  std::vector<bool> used(nh, false);
  for (std::size_t h0 = 0; h0 < nh; ++h0) {
    if (used[h0]) continue;
    Ring ring;
    for (std::size_t h = h0; !used[h];) {
      used[h] = true;
      ring.push_back(out.vertices[origin[h]]);
      const std::size_t v = target[h];
      const auto& ring_v = around[v];
      const std::size_t k = slot[h ^ 1];
      h = ring_v[(k + ring_v.size() - 1) % ring_v.size()];
    }
    const double area = signed_area(ring);
    if (area < 0.0) {
      ++out.outer_cycles;
      continue;
    }
    const Point inner = interior_centre(ring).point;
    if (locate(d, inner) == Location::kInterior) {
      out.faces.push_back(std::move(ring));
    } else {
      ++out.hole_faces;
    }
  }
  return out;
}

OverlaySubdivision build_overlay(const PolygonalDomain& domain, const OverlayOptions& options) {
  return build_overlay(VisibilityGraph(domain), options);
}

}  // namespace l1m
