#include "l1median/domain.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

namespace l1m {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSelfIntersection: return "SelfIntersection";
    case ErrorCode::kHoleOutsideOuter: return "HoleOutsideOuter";
    case ErrorCode::kHolesOverlap: return "HolesOverlap";
    case ErrorCode::kDegenerateRing: return "DegenerateRing";
    case ErrorCode::kDiagonalAlignment: return "DiagonalAlignment";
    case ErrorCode::kPointOutsideDomain: return "PointOutsideDomain";
    case ErrorCode::kDegenerateBisector: return "DegenerateBisector";
    case ErrorCode::kDegeneratePosition: return "DegeneratePosition";
    case ErrorCode::kDegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::kNonHorizontalBase: return "NonHorizontalBase";
    case ErrorCode::kApexOutsideQuadrant: return "ApexOutsideQuadrant";
    case ErrorCode::kIllConditionedFit: return "IllConditionedFit";
    case ErrorCode::kCellTooThin: return "CellTooThin";
    case ErrorCode::kOutsideCell: return "OutsideCell";
    case ErrorCode::kNotATree: return "NotATree";
    case ErrorCode::kHasHoles: return "HasHoles";
    case ErrorCode::kBadInput: return "BadInput";
  }
  return "Unknown";
}

namespace {

bool ring_edges_touch(const Ring& r, std::size_t i, const Ring& s, std::size_t j) {
  return segments_touch(r[i], r[(i + 1) % r.size()], s[j], s[(j + 1) % s.size()]);
}

void check_ring(const Ring& ring, int idx) {
  if (ring.size() < 3) {
    throw Error(ErrorCode::kDegenerateRing, "ring has fewer than 3 vertices", idx);
  }
  const std::size_t n = ring.size();
  for (const Point& p : ring) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || std::abs(p.x) > kCoordLimit ||
        std::abs(p.y) > kCoordLimit) {
      throw Error(ErrorCode::kDegenerateRing, "coordinate not finite or out of range", idx);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[(i + n - 1) % n];
    const Point b = ring[i];
    const Point c = ring[(i + 1) % n];
    if (near(b, c)) throw Error(ErrorCode::kDegenerateRing, "zero-length edge", idx);
    if (std::abs(orient(a, b, c)) <= kEpsGeom * std::max(1.0, euclid(a, c))) {
      throw Error(ErrorCode::kDegenerateRing, "three consecutive collinear vertices", idx);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (ring_edges_touch(ring, i, ring, j)) {
        throw Error(ErrorCode::kSelfIntersection,
                    "edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect", idx);
      }
    }
  }
  if (std::abs(signed_area(ring)) <= kEpsGeom) {
    throw Error(ErrorCode::kDegenerateRing, "ring has zero area", idx);
  }
}

bool rings_touch(const Ring& r, const Ring& s) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (ring_edges_touch(r, i, s, j)) return true;
    }
  }
  return false;
}

}  // namespace

void PolygonalDomain::index() {
  vertices_.clear();
  refs_.clear();
  prev_.clear();
  next_.clear();
  edges_.clear();
  lo_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  hi_ = {-lo_.x, -lo_.y};
  area_ = 0.0;
  for (std::size_t r = 0; r < rings_.size(); ++r) {
    const Ring& ring = rings_[r];
    const std::size_t base = vertices_.size();
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      vertices_.push_back(ring[i]);
      refs_.push_back({static_cast<int>(r), static_cast<int>(i)});
      prev_.push_back(base + (i + n - 1) % n);
      next_.push_back(base + (i + 1) % n);
      edges_.push_back({ring[i], ring[(i + 1) % n], static_cast<int>(r),
                        static_cast<int>(base + i)});
      lo_ = {std::min(lo_.x, ring[i].x), std::min(lo_.y, ring[i].y)};
      hi_ = {std::max(hi_.x, ring[i].x), std::max(hi_.y, ring[i].y)};
    }
    area_ += signed_area(ring);
  }
  diameter_ = euclid(lo_, hi_);
}

PolygonalDomain validate_domain(const std::vector<Ring>& rings) {
  if (rings.empty()) throw Error(ErrorCode::kDegenerateRing, "no rings given", 0);
  std::vector<Ring> norm = rings;
  for (std::size_t r = 0; r < norm.size(); ++r) {
    check_ring(norm[r], static_cast<int>(r));
    const bool ccw = signed_area(norm[r]) > 0.0;
    const bool want_ccw = r == 0;
    if (ccw != want_ccw) std::reverse(norm[r].begin(), norm[r].end());
  }
  for (std::size_t h = 1; h < norm.size(); ++h) {
    const int idx = static_cast<int>(h);
    if (rings_touch(norm[0], norm[h]) || !point_in_ring(norm[0], norm[h][0])) {
      throw Error(ErrorCode::kHoleOutsideOuter, "hole is not strictly inside the outer ring", idx);
    }
    for (std::size_t g = 1; g < h; ++g) {
      if (rings_touch(norm[g], norm[h]) || point_in_ring(norm[g], norm[h][0]) ||
          point_in_ring(norm[h], norm[g][0])) {
        throw Error(ErrorCode::kHolesOverlap,
                    "hole overlaps hole " + std::to_string(g), idx);
      }
    }
  }
  PolygonalDomain d;
  d.rings_ = std::move(norm);
  d.index();
  return d;
}

double area(const PolygonalDomain& domain) { return domain.area(); }

double boundary_distance(const PolygonalDomain& domain, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (const Edge& e : domain.edges()) best = std::min(best, point_segment_distance(p, e.a, e.b));
  return best;
}

Location locate(const PolygonalDomain& domain, Point p) {
  const double band = 1e-9 * domain.diameter();
  if (boundary_distance(domain, p) <= band) return Location::kBoundary;
  bool in = false;
  for (const Ring& r : domain.rings()) {
    if (point_in_ring(r, p)) in = !in;
  }
  return in ? Location::kInterior : Location::kExterior;
}

bool is_reflex(const PolygonalDomain& domain, std::size_t v) {
  const auto& pts = domain.vertices();
  return orient(pts[domain.prev_vertex(v)], pts[v], pts[domain.next_vertex(v)]) < 0.0;
}

std::vector<CriticalVertex> critical_vertices(const PolygonalDomain& domain) {
  std::vector<CriticalVertex> out;
  const auto& pts = domain.vertices();
  for (std::size_t v = 0; v < pts.size(); ++v) {
    if (!is_reflex(domain, v)) continue;
    const Point p = pts[domain.prev_vertex(v)];
    const Point q = pts[domain.next_vertex(v)];
    const Point c = pts[v];
    CriticalVertex cv;
    cv.vertex = v;
    cv.point = c;
    cv.x_min = p.x >= c.x - kEpsGeom && q.x >= c.x - kEpsGeom;
    cv.x_max = p.x <= c.x + kEpsGeom && q.x <= c.x + kEpsGeom;
    cv.y_min = p.y >= c.y - kEpsGeom && q.y >= c.y - kEpsGeom;
    cv.y_max = p.y <= c.y + kEpsGeom && q.y <= c.y + kEpsGeom;
    if (cv.x_extremal() || cv.y_extremal()) out.push_back(cv);
  }
  return out;
}

bool segment_in_domain(const PolygonalDomain& domain, Point a, Point b) {
  const double band = 1e-9 * domain.diameter();
  const double len = euclid(a, b);
  if (len <= band) return contains(domain, a);
  std::vector<double> ts{0.0, 1.0};
  bool touched = false;
  for (const Edge& e : domain.edges()) {
    // Quick reject on bounding boxes.
    if (std::max(a.x, b.x) < std::min(e.a.x, e.b.x) - band ||
        std::min(a.x, b.x) > std::max(e.a.x, e.b.x) + band ||
        std::max(a.y, b.y) < std::min(e.a.y, e.b.y) - band ||
        std::min(a.y, b.y) > std::max(e.a.y, e.b.y) + band) {
      continue;
    }
    if (segments_cross_properly(a, b, e.a, e.b, 1e-12)) return false;
    for (Point c : {e.a, e.b}) {
      if (point_segment_distance(c, a, b) <= band) {
        ts.push_back(project_parameter(c, a, b));
        touched = true;
      }
    }
    for (Point c : {a, b}) {
      if (point_segment_distance(c, e.a, e.b) <= band) touched = true;
    }
  }
  if (!touched) return contains(domain, a + 0.5 * (b - a));
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if ((ts[i + 1] - ts[i]) * len <= band) continue;
    const double t = 0.5 * (ts[i] + ts[i + 1]);
    if (!contains(domain, a + t * (b - a))) return false;
  }
  return true;
}

std::vector<std::pair<std::size_t, std::size_t>> diagonal_alignments(
    const PolygonalDomain& domain, double eps) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto& pts = domain.vertices();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dx = std::abs(pts[i].x - pts[j].x);
      const double dy = std::abs(pts[i].y - pts[j].y);
      if (std::abs(dx - dy) <= eps) out.emplace_back(i, j);
    }
  }
  return out;
}

PolygonalDomain perturb_domain(const PolygonalDomain& domain, double scale) {
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> jitter(-scale, scale);
  std::vector<Ring> rings = domain.rings();
  for (int attempt = 0; attempt < 64; ++attempt) {
    PolygonalDomain d = validate_domain(rings);
    const auto bad = diagonal_alignments(d, std::max(kEpsGeom, 1e-3 * scale));
    if (bad.empty()) return d;
    for (const auto& [i, j] : bad) {
      const VertexRef r = d.vertex_ref(j);
      Point& p = rings[static_cast<std::size_t>(r.ring)][static_cast<std::size_t>(r.index)];
      p.x += jitter(rng);
      p.y += jitter(rng);
    }
  }
  return validate_domain(rings);
}

}  // namespace l1m
