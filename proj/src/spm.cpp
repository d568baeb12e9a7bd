#include "l1median/spm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <queue>

#include "l1median/trapezoid.hpp"

namespace l1m {

struct VisibilityGraph::Impl {
  // Visibility polygon of each vertex as a fan of ccw triangles (v, a, b).
  std::vector<std::vector<Ring>> fans;
  std::vector<Ring> pieces;  // convex cover of the domain
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tol_of(const PolygonalDomain& d) { return 1e-9 * std::max(1.0, d.diameter()); }

// Nearest hit of the ray r + t * dir (t > tmin) with a domain edge.
struct RayHit {
  double t = kInf;
  const Edge* edge = nullptr;
};

RayHit cast_ray(const PolygonalDomain& d, Point r, Point dir, double tmin) {
  RayHit hit;
  for (const Edge& e : d.edges()) {
    const Point ab = e.b - e.a;
    const double den = cross(dir, ab);
    if (std::abs(den) <= 1e-300) continue;
    const Point ar = e.a - r;
    const double t = cross(ar, ab) / den;
    const double u = cross(ar, dir) / den;
    if (u < -1e-12 || u > 1.0 + 1e-12 || t <= tmin || t >= hit.t) continue;
    hit = {t, &e};
  }
  return hit;
}

// Visibility polygon of r by angular ray casting between consecutive vertex
// directions, as a fan of convex polygons around r. Inside one angular gap
// the nearest edge cannot change.
std::vector<Ring> visibility_fan(const PolygonalDomain& d, Point r) {
  const double tol = tol_of(d);
  struct Dir {
    double angle;
    Point v;
  };
  std::vector<Dir> dirs;
  for (Point v : d.vertices()) {
    if (euclid(v, r) <= tol) continue;
    dirs.push_back({std::atan2(v.y - r.y, v.x - r.x), v - r});
  }
  std::sort(dirs.begin(), dirs.end(), [](const Dir& a, const Dir& b) { return a.angle < b.angle; });
  std::vector<Dir> uniq;
  for (const Dir& dir : dirs) {
    if (uniq.empty() || dir.angle - uniq.back().angle > 1e-13) uniq.push_back(dir);
  }
  if (uniq.size() > 1 && uniq.front().angle + 2.0 * std::numbers::pi - uniq.back().angle <= 1e-13) {
    uniq.pop_back();
  }
  std::vector<Ring> fan;
  const std::size_t m = uniq.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Dir& d0 = uniq[i];
    const Dir& d1 = uniq[(i + 1) % m];
    double gap = d1.angle - d0.angle;
    if (gap <= 0.0) gap += 2.0 * std::numbers::pi;
    if (gap >= std::numbers::pi) continue;
    const Point u0 = (1.0 / std::hypot(d0.v.x, d0.v.y)) * d0.v;
    const Point u1 = (1.0 / std::hypot(d1.v.x, d1.v.y)) * d1.v;
    const Point mid = u0 + u1;
    const RayHit hit = cast_ray(d, r, mid, tol);
    if (hit.edge == nullptr) continue;
    if (!contains(d, r + (0.5 * hit.t) * mid)) continue;
    const auto pa = line_intersection(r, r + d0.v, hit.edge->a, hit.edge->b);
    const auto pb = line_intersection(r, r + d1.v, hit.edge->a, hit.edge->b);
    if (!pa || !pb) continue;
    if (!fan.empty()) {
      // Extend the previous convex polygon when the new triangle continues it.
      Ring& prev = fan.back();
      const Point j = prev.back();
      const Point p = prev[prev.size() - 2];
      if (near(j, *pa, tol) && orient(p, j, *pb) >= -tol * euclid(p, *pb) &&
          cross(prev[1] - r, *pb - r) > 0.0) {
        if (std::abs(orient(p, j, *pb)) <= tol * euclid(p, *pb) && prev.size() > 3) prev.pop_back();
        prev.push_back(*pb);
        continue;
      }
    }
    Ring tri = tidy_convex({r, *pa, *pb}, 1e-12 * std::max(1.0, d.diameter()));
    if (!tri.empty()) fan.push_back(std::move(tri));
  }
  for (Ring& poly : fan) poly = tidy_convex(poly, 1e-12 * std::max(1.0, d.diameter()));
  std::erase_if(fan, [](const Ring& poly) { return poly.empty(); });
  return fan;
}

struct Box {
  double x0 = kInf, y0 = kInf, x1 = -kInf, y1 = -kInf;

  explicit Box(const Ring& ring) {
    for (Point p : ring) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
  }
  bool overlaps(const Box& o, double tol) const {
    return x0 <= o.x1 + tol && o.x0 <= x1 + tol && y0 <= o.y1 + tol && o.y0 <= y1 + tol;
  }
  // L1 distance from p to the box.
  double l1_to(Point p) const {
    return std::max({0.0, x0 - p.x, p.x - x1}) + std::max({0.0, y0 - p.y, p.y - y1});
  }
};

// Tie-rule-aware comparison: true when root s (distance ds at point ps)
// takes p from root r.
bool wins(double ds, Point s, int sid, double dr, Point r, int rid, Point p, double tol) {
  const double vs = ds + l1_distance(s, p);
  const double vr = dr + l1_distance(r, p);
  if (vs < vr - tol) return true;
  if (vs > vr + tol) return false;
  const double ls = l1_distance(s, p);
  const double lr = l1_distance(r, p);
  if (ls < lr - tol) return true;
  if (ls > lr + tol) return false;
  return sid < rid;
}

std::vector<int> root_path(const GeodesicLabeling& labels, int root) {
  std::vector<int> path;
  for (int v = root; v != kSourceRoot; v = labels.pred[static_cast<std::size_t>(v)]) {
    path.push_back(v);
    if (path.size() > labels.pred.size()) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Point root_point(const VisibilityGraph& g, const GeodesicLabeling& labels, int root) {
  return root == kSourceRoot ? labels.source : g.domain().vertices()[static_cast<std::size_t>(root)];
}

double root_dist(const GeodesicLabeling& labels, int root) {
  return root == kSourceRoot ? 0.0 : labels.dist[static_cast<std::size_t>(root)];
}

}  // namespace

VisibilityGraph::VisibilityGraph(const PolygonalDomain& domain)
    : domain_(domain), n_(domain.size()), vis_(n_ * n_, 0), impl_(std::make_unique<Impl>()) {
  const auto& v = domain_.vertices();
  for (std::size_t i = 0; i < n_; ++i) {
    vis_[i * n_ + i] = 1;
    for (std::size_t j = i + 1; j < n_; ++j) {
      const bool ok = segment_in_domain(domain_, v[i], v[j]);
      vis_[i * n_ + j] = vis_[j * n_ + i] = ok ? 1 : 0;
    }
  }
  impl_->fans.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i) impl_->fans.push_back(visibility_fan(domain_, v[i]));
  for (const Trapezoid& t : trapezoidize(domain_, Axis::kVertical).trapezoids) {
    impl_->pieces.push_back(t.polygon);
  }
}

VisibilityGraph::~VisibilityGraph() = default;
VisibilityGraph::VisibilityGraph(VisibilityGraph&&) noexcept = default;
VisibilityGraph& VisibilityGraph::operator=(VisibilityGraph&&) noexcept = default;

std::vector<std::size_t> VisibilityGraph::visible_from(Point p) const {
  std::vector<std::size_t> out;
  const auto& v = domain_.vertices();
  for (std::size_t i = 0; i < n_; ++i) {
    if (segment_in_domain(domain_, p, v[i])) out.push_back(i);
  }
  return out;
}

int VisibilityGraph::vertex_at(Point p) const {
  const double tol = tol_of(domain_);
  const auto& v = domain_.vertices();
  for (std::size_t i = 0; i < n_; ++i) {
    if (near(v[i], p, tol)) return static_cast<int>(i);
  }
  return -1;
}

GeodesicLabeling label_vertices(const VisibilityGraph& graph, Point source) {
  const PolygonalDomain& d = graph.domain();
  if (!contains(d, source)) {
    throw Error(ErrorCode::kPointOutsideDomain, "source lies outside the domain");
  }
  const auto& v = d.vertices();
  const std::size_t n = v.size();
  const double tol = tol_of(d);
  GeodesicLabeling lab;
  lab.source = source;
  lab.dist.assign(n, kInf);
  lab.pred.assign(n, kSourceRoot);
  lab.source_visible.assign(n, 0);
  const int at = graph.vertex_at(source);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (std::size_t i = 0; i < n; ++i) {
    const bool vis = at >= 0 ? graph.visible(static_cast<std::size_t>(at), i)
                             : segment_in_domain(d, source, v[i]);
    if (!vis) continue;
    lab.source_visible[i] = 1;
    lab.dist[i] = l1_distance(source, v[i]);
    pq.push({lab.dist[i], i});
  }
  std::vector<std::uint8_t> done(n, 0);
  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (std::size_t w = 0; w < n; ++w) {
      if (w == u || !graph.visible(u, w)) continue;
      const double nd = du + l1_distance(v[u], v[w]);
      if (nd < lab.dist[w] - tol) {
        lab.dist[w] = nd;
        lab.pred[w] = static_cast<int>(u);
        pq.push({nd, w});
      }
    }
  }

  // First-move bits over all tight predecessor edges, in distance order.
  auto bits = [tol](double delta) -> std::uint8_t {
    if (delta > tol) return kMovePos;
    if (delta < -tol) return kMoveNeg;
    return kMoveAligned;
  };
  auto carry = [&](std::uint8_t from, double delta) -> std::uint8_t {
    std::uint8_t out = from & (kMoveNeg | kMovePos);
    if (from & kMoveAligned) out |= bits(delta);
    return out;
  };
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lab.dist[a] < lab.dist[b]; });
  lab.first_x.assign(n, 0);
  lab.first_y.assign(n, 0);
  for (std::size_t w : order) {
    if (lab.source_visible[w] && std::abs(lab.dist[w] - l1_distance(source, v[w])) <= tol) {
      lab.first_x[w] |= bits(v[w].x - source.x);
      lab.first_y[w] |= bits(v[w].y - source.y);
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (u == w || !graph.visible(u, w) || lab.dist[u] >= lab.dist[w]) continue;
      if (std::abs(lab.dist[u] + l1_distance(v[u], v[w]) - lab.dist[w]) > tol) continue;
      lab.first_x[w] |= carry(lab.first_x[u], v[w].x - source.x);
      lab.first_y[w] |= carry(lab.first_y[u], v[w].y - source.y);
    }
  }
  return lab;
}

RootChoice best_root(const VisibilityGraph& graph, const GeodesicLabeling& labels, Point p) {
  const PolygonalDomain& d = graph.domain();
  const double tol = tol_of(d);
  RootChoice best{kSourceRoot, kInf};
  Point best_pt{};
  if (segment_in_domain(d, labels.source, p)) {
    best = {kSourceRoot, l1_distance(labels.source, p)};
    best_pt = labels.source;
  }
  const auto& v = d.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double di = labels.dist[i];
    if (!std::isfinite(di)) continue;
    const double cand = di + l1_distance(v[i], p);
    if (cand > best.dist + tol) continue;
    const bool take = !std::isfinite(best.dist) ||
                      wins(di, v[i], static_cast<int>(i), best.dist - l1_distance(best_pt, p), best_pt,
                           best.root, p, tol);
    if (!take) continue;
    if (!segment_in_domain(d, v[i], p)) continue;
    best = {static_cast<int>(i), cand};
    best_pt = v[i];
  }
  if (!std::isfinite(best.dist)) {
    throw Error(ErrorCode::kPointOutsideDomain, "point is not reachable inside the domain");
  }
  return best;
}

double distance_from_labels(const VisibilityGraph& graph, const GeodesicLabeling& labels, Point p) {
  return best_root(graph, labels, p).dist;
}

double geodesic_distance(const VisibilityGraph& graph, Point a, Point b) {
  if (!contains(graph.domain(), b)) {
    throw Error(ErrorCode::kPointOutsideDomain, "target lies outside the domain");
  }
  if (near(a, b, 0.0)) {
    if (!contains(graph.domain(), a)) {
      throw Error(ErrorCode::kPointOutsideDomain, "source lies outside the domain");
    }
    return 0.0;
  }
  // Visible pairs are exactly the straight distance; going through the
  // labels could round differently along a path through a vertex.
  if (segment_in_domain(graph.domain(), a, b)) return l1_distance(a, b);
  return distance_from_labels(graph, label_vertices(graph, a), b);
}

double geodesic_distance(const PolygonalDomain& domain, Point a, Point b) {
  return geodesic_distance(VisibilityGraph(domain), a, b);
}

double ShortestPathMap::total_area() const {
  double s = 0.0;
  for (const SpmCell& c : cells) s += c.area;
  return s;
}

namespace {

bool inside_convex(const Ring& ring, Point p, double tol) {
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point a = ring[i];
    const Point b = ring[(i + 1) % ring.size()];
    if (orient(a, b, p) < -tol * euclid(a, b)) return false;
  }
  return true;
}

void extract_bisectors(const VisibilityGraph& graph, ShortestPathMap& spm) {
  const PolygonalDomain& d = graph.domain();
  const double tol = tol_of(d);
  const double step = 1e-7 * std::max(1.0, d.diameter());
  // Every cell is a union of convex pieces; locate probes among them.
  struct Piece {
    Box box;
    const Ring* ring;
    int root;
  };
  std::vector<Piece> all;
  for (const SpmCell& cell : spm.cells) {
    for (const Polygon& poly : cell.region) all.push_back({Box(poly.outer), &poly.outer, cell.root});
  }
  auto owner = [&](Point p) -> std::optional<int> {
    for (const Piece& pc : all) {
      if (p.x < pc.box.x0 || p.x > pc.box.x1 || p.y < pc.box.y0 || p.y > pc.box.y1) continue;
      if (inside_convex(*pc.ring, p, 0.0)) return pc.root;
    }
    return std::nullopt;
  };
  std::map<std::pair<int, int>, std::vector<Segment>> pieces;
  for (const Piece& pc : all) {
    const Ring& ring = *pc.ring;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point a = ring[i];
      const Point b = ring[(i + 1) % ring.size()];
      const double len = euclid(a, b);
      if (len <= 10 * tol) continue;
      // The piece lies to the left of its ccw edges.
      const Point normal{(b.y - a.y) / len, -(b.x - a.x) / len};
      const auto other = owner(0.5 * (a + b) + step * normal);
      if (!other || *other == pc.root || pc.root > *other) continue;
      pieces[{pc.root, *other}].push_back({a, b});
    }
  }
  for (auto& [key, segs] : pieces) {
    std::vector<std::uint8_t> used(segs.size(), 0);
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (used[i]) continue;
      used[i] = 1;
      std::vector<Point> chain{segs[i].a, segs[i].b};
      bool grew = true;
      while (grew) {
        grew = false;
        for (std::size_t j = 0; j < segs.size(); ++j) {
          if (used[j]) continue;
          const Segment s = segs[j];
          if (near(chain.back(), s.a, 10 * tol)) {
            chain.push_back(s.b);
          } else if (near(chain.back(), s.b, 10 * tol)) {
            chain.push_back(s.a);
          } else if (near(chain.front(), s.b, 10 * tol)) {
            chain.insert(chain.begin(), s.a);
          } else if (near(chain.front(), s.a, 10 * tol)) {
            chain.insert(chain.begin(), s.b);
          } else {
            continue;
          }
          used[j] = 1;
          grew = true;
        }
      }
      // Merge collinear runs.
      std::vector<Point> merged;
      for (Point p : chain) {
        while (merged.size() >= 2 &&
               std::abs(orient(merged[merged.size() - 2], merged.back(), p)) <=
                   tol * euclid(merged[merged.size() - 2], p)) {
          merged.pop_back();
        }
        merged.push_back(p);
      }
      spm.bisectors.push_back({key.first, key.second, std::move(merged), BisectorKind::kCrossable});
    }
  }
}

}  // namespace

namespace {

struct RootInfo {
  int id;
  Point point;
  double dist;
  const std::vector<Ring>* fan;
  std::vector<Box> boxes;
  std::vector<std::vector<HalfPlane>> planes;  // inward unit normals of each fan polygon
};

struct FanItem {
  std::size_t root;  // index into the root list
  std::size_t tri;
};

// Recursive lower-envelope construction on one convex piece. Pieces are split
// along fan edges and root axis lines until every surviving root sees the
// whole piece and is linear on it; ownership is then a half-plane clip.
class EnvelopeBuilder {
 public:
  EnvelopeBuilder(const std::vector<RootInfo>& roots, double tol, ShortestPathMap& spm)
      : roots_(roots), tol_(tol), tidy_eps_(1e-3 * tol), spm_(spm) {}

  void run(const Ring& piece) {
    const Box box(piece);
    std::vector<FanItem> items;
    for (std::size_t r = 0; r < roots_.size(); ++r) {
      const RootInfo& root = roots_[r];
      for (std::size_t t = 0; t < root.fan->size(); ++t) {
        if (root.boxes[t].overlaps(box, tol_)) items.push_back({r, t});
      }
    }
    split(piece, {}, items, 0);
  }

 private:
  enum class Cover { kNone, kPartial, kFull };

  Cover classify(const Ring& q, const std::vector<HalfPlane>& tri) const {
    bool full = true;
    for (const HalfPlane& h : tri) {
      double lo = kInf, hi = -kInf;
      for (Point p : q) {
        const double v = h.eval(p);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi <= tol_) return Cover::kNone;
      if (lo < -tol_) full = false;
    }
    if (full) return Cover::kFull;
    Ring inter = q;
    for (std::size_t k = 0; k < tri.size() && !inter.empty(); ++k) inter = clip_convex(inter, tri[k]);
    inter = tidy_convex(inter, tidy_eps_);
    if (inter.empty() || std::abs(signed_area(inter)) <= tol_ * tol_) return Cover::kNone;
    return Cover::kPartial;
  }

  double value(std::size_t r, Point p) const {
    return roots_[r].dist + l1_distance(roots_[r].point, p);
  }

  // `full` lists roots already known to see all of q; `items` are fan
  // polygons that may overlap q.
  void split(const Ring& q, std::vector<std::size_t> full, const std::vector<FanItem>& items, int depth) {
    const Box box(q);
    std::vector<FanItem> partial;
    for (const FanItem& it : items) {
      if (std::find(full.begin(), full.end(), it.root) != full.end()) continue;
      const Cover cover = classify(q, roots_[it.root].planes[it.tri]);
      if (cover == Cover::kFull) {
        full.push_back(it.root);
      } else if (cover == Cover::kPartial) {
        partial.push_back(it);
      }
    }
    // Prune roots that cannot reach the lower envelope anywhere on q.
    double upper = kInf;
    for (std::size_t r : full) {
      double worst = -kInf;
      for (Point p : q) worst = std::max(worst, value(r, p));
      upper = std::min(upper, worst);
    }
    auto alive = [&](std::size_t r) { return roots_[r].dist + box.l1_to(roots_[r].point) <= upper + tol_; };
    std::erase_if(full, [&](std::size_t r) { return !alive(r); });
    std::erase_if(partial, [&](const FanItem& it) {
      return !alive(it.root) || std::find(full.begin(), full.end(), it.root) != full.end();
    });
    if (!partial.empty() && depth < 400) {
      // Split along a fan edge of a live partial item that strictly crosses q.
      for (const FanItem& it : partial) {
        for (const HalfPlane& e : roots_[it.root].planes[it.tri]) {
          double lo = kInf, hi = -kInf;
          for (Point p : q) {
            lo = std::min(lo, e.eval(p));
            hi = std::max(hi, e.eval(p));
          }
          if (lo < -tol_ && hi > tol_) {
            divide(q, e, full, partial, depth);
            return;
          }
        }
      }
    }
    if (full.empty()) return;
    // Every live root now sees all of q. Split along axis lines through roots.
    for (std::size_t r : full) {
      const Point c = roots_[r].point;
      if (box.x0 < c.x - tol_ && box.x1 > c.x + tol_) {
        divide(q, HalfPlane{1.0, 0.0, -c.x}, full, {}, depth);
        return;
      }
      if (box.y0 < c.y - tol_ && box.y1 > c.y + tol_) {
        divide(q, HalfPlane{0.0, 1.0, -c.y}, full, {}, depth);
        return;
      }
    }
    std::sort(full.begin(), full.end());
    assign(q, full);
  }

  void divide(const Ring& q, const HalfPlane& h, const std::vector<std::size_t>& full,
              const std::vector<FanItem>& items, int depth) {
    for (const HalfPlane& side : {h, HalfPlane{-h.a, -h.b, -h.c}}) {
      Ring part = tidy_convex(clip_convex(q, side), tidy_eps_);
      if (part.empty() || std::abs(signed_area(part)) <= tol_ * tol_) continue;
      split(part, full, items, depth + 1);
    }
  }

  void assign(const Ring& q, const std::vector<std::size_t>& live) {
    Point c{0.0, 0.0};
    for (Point p : q) c = c + p;
    c = (1.0 / static_cast<double>(q.size())) * c;
    for (std::size_t r : live) {
      const RootInfo& R = roots_[r];
      const double sxr = c.x > R.point.x ? 1.0 : -1.0;
      const double syr = c.y > R.point.y ? 1.0 : -1.0;
      Ring piece = q;
      for (std::size_t s : live) {
        if (s == r || piece.empty()) continue;
        const RootInfo& S = roots_[s];
        const double sxs = c.x > S.point.x ? 1.0 : -1.0;
        const double sys = c.y > S.point.y ? 1.0 : -1.0;
        // g = f_s - f_r; r keeps the part where g >= 0.
        const double a = sxs - sxr;
        const double b = sys - syr;
        const double g0 = S.dist - R.dist - sxs * S.point.x - sys * S.point.y + sxr * R.point.x +
                          syr * R.point.y;
        if (a == 0.0 && b == 0.0) {
          if (g0 < -tol_ || (g0 <= tol_ && wins(S.dist, S.point, S.id, R.dist, R.point, R.id, c, tol_))) {
            piece.clear();
          }
          continue;
        }
        piece = tidy_convex(clip_convex(piece, HalfPlane{a, b, g0}), tidy_eps_);
      }
      if (piece.empty()) continue;
      const double area = signed_area(piece);
      if (area <= tol_ * tol_) continue;
      SpmCell& cell = spm_.cells[static_cast<std::size_t>(R.id + 1)];
      cell.region.push_back(Polygon{std::move(piece), {}});
      cell.area += area;
    }
  }

  const std::vector<RootInfo>& roots_;
  double tol_;
  double tidy_eps_;
  ShortestPathMap& spm_;
};

// Merges overlapping collinear intervals [lo, hi].
std::vector<std::pair<double, double>> merge_intervals(std::vector<std::pair<double, double>> v,
                                                       double tol) {
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.first <= out.back().second + tol) {
      out.back().second = std::max(out.back().second, iv.second);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

// Range of the coordinate `along` over the chord of a convex ring cut by the
// line coordinate `fixed` = value.
std::optional<std::pair<double, double>> chord_of(const Ring& ring, bool vertical, double value,
                                                  double tol) {
  double lo = kInf, hi = -kInf;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    Point p = ring[i];
    Point q = ring[(i + 1) % ring.size()];
    if (!vertical) {
      p = transpose(p);
      q = transpose(q);
    }
    const double fp = p.x - value;
    const double fq = q.x - value;
    if (std::abs(fp) <= tol) {
      lo = std::min(lo, p.y);
      hi = std::max(hi, p.y);
    }
    if ((fp < -tol && fq > tol) || (fp > tol && fq < -tol)) {
      const double y = p.y + fp / (fp - fq) * (q.y - p.y);
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  if (hi - lo <= tol) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace

ShortestPathMap build_spm(const VisibilityGraph& graph, Point source, SpmDetail detail) {
  const PolygonalDomain& d = graph.domain();
  const VisibilityGraph::Impl& impl = graph.impl();
  const double tol = tol_of(d);
  ShortestPathMap spm;
  spm.source = source;
  spm.labels = label_vertices(graph, source);
  const auto& verts = d.vertices();
  const std::size_t n = verts.size();

  const int at = graph.vertex_at(source);
  const std::vector<Ring> source_fan =
      at >= 0 ? impl.fans[static_cast<std::size_t>(at)] : visibility_fan(d, source);
  std::vector<RootInfo> roots;
  spm.cells.resize(n + 1);
  for (int r = kSourceRoot; r < static_cast<int>(n); ++r) {
    SpmCell& cell = spm.cells[static_cast<std::size_t>(r + 1)];
    cell.root = r;
    cell.root_point = root_point(graph, spm.labels, r);
    cell.root_dist = root_dist(spm.labels, r);
    if (!std::isfinite(cell.root_dist)) continue;
    RootInfo info{r, cell.root_point, cell.root_dist,
                  r == kSourceRoot ? &source_fan : &impl.fans[static_cast<std::size_t>(r)], {}, {}};
    for (const Ring& tri : *info.fan) {
      info.boxes.emplace_back(tri);
      std::vector<HalfPlane> planes(tri.size());
      for (std::size_t k = 0; k < tri.size(); ++k) {
        const Point a = tri[k];
        const Point b = tri[(k + 1) % tri.size()];
        const double len = euclid(a, b);
        // Left of a ccw edge is inside.
        planes[k] = HalfPlane{-(b.y - a.y) / len, (b.x - a.x) / len,
                              (a.x * (b.y - a.y) - a.y * (b.x - a.x)) / len};
      }
      info.planes.push_back(planes);
    }
    roots.push_back(std::move(info));
  }
  EnvelopeBuilder builder(roots, tol, spm);
  for (const Ring& piece : impl.pieces) builder.run(piece);
  if (detail == SpmDetail::kCells) return spm;

  // Axis chords through the source, clipped to its cell and split at the
  // source into the four quadrant boundaries.
  for (bool vertical : {true, false}) {
    std::vector<std::pair<double, double>> spans;
    for (const Polygon& poly : spm.cells[0].region) {
      if (auto c = chord_of(poly.outer, vertical, vertical ? source.x : source.y, tol)) spans.push_back(*c);
    }
    const double at = vertical ? source.y : source.x;
    auto point_at = [&](double t) { return vertical ? Point{source.x, t} : Point{t, source.y}; };
    for (const auto& [lo, hi] : merge_intervals(std::move(spans), tol)) {
      if (lo < at - tol && at + tol < hi) {
        spm.quadrant_chords.push_back({source, point_at(lo)});
        spm.quadrant_chords.push_back({source, point_at(hi)});
      } else {
        spm.quadrant_chords.push_back({point_at(lo), point_at(hi)});
      }
    }
  }
  extract_bisectors(graph, spm);
  return spm;
}

ShortestPathMap classify_watersheds(ShortestPathMap spm, const VisibilityGraph& graph) {
  const PolygonalDomain& d = graph.domain();
  const double probe = 1e-6 * d.diameter();
  const double slack = 1e-3 * probe;
  // A chain can be a watershed over part of its length only, since the
  // distance gradients of both roots flip at their axis lines. Every piece
  // is probed at its midpoint and chains are cut into runs of one kind.
  auto kind_of = [&](Point a, Point c) {
    const double len = euclid(a, c);
    if (len <= 0.0) return BisectorKind::kCrossable;
    const Point mid = 0.5 * (a + c);
    const Point normal{-(c.y - a.y) / len, (c.x - a.x) / len};
    const Point plus = mid + probe * normal;
    const Point minus = mid - probe * normal;
    if (!contains(d, plus) || !contains(d, minus)) return BisectorKind::kCrossable;
    const double d0 = distance_from_labels(graph, spm.labels, mid);
    const double dp = distance_from_labels(graph, spm.labels, plus);
    const double dm = distance_from_labels(graph, spm.labels, minus);
    return (dp < d0 - slack && dm < d0 - slack) ? BisectorKind::kWatershed : BisectorKind::kCrossable;
  };
  std::vector<Bisector> out;
  for (const Bisector& b : spm.bisectors) {
    for (std::size_t i = 0; i + 1 < b.chain.size(); ++i) {
      const BisectorKind k = kind_of(b.chain[i], b.chain[i + 1]);
      if (i > 0 && out.back().kind == k) {
        out.back().chain.push_back(b.chain[i + 1]);
      } else {
        out.push_back({b.root_a, b.root_b, {b.chain[i], b.chain[i + 1]}, k});
      }
    }
  }
  spm.bisectors = std::move(out);
  spm.classified = true;
  return spm;
}

void check_regular_position(const VisibilityGraph& graph, const GeodesicLabeling& labels) {
  const PolygonalDomain& d = graph.domain();
  const double tol = tol_of(d);
  const Point z = labels.source;
  for (const CriticalVertex& cv : critical_vertices(d)) {
    if (cv.x_extremal() && std::abs(cv.point.x - z.x) <= tol) {
      throw Error(ErrorCode::kDegeneratePosition, "x coordinate coincides with a critical vertex");
    }
    if (cv.y_extremal() && std::abs(cv.point.y - z.y) <= tol) {
      throw Error(ErrorCode::kDegeneratePosition, "y coordinate coincides with a critical vertex");
    }
  }
  constexpr std::uint8_t both = kMoveNeg | kMovePos;
  for (std::size_t v = 0; v < labels.dist.size(); ++v) {
    if ((labels.first_x[v] & both) == both || (labels.first_y[v] & both) == both) {
      throw Error(ErrorCode::kDegeneratePosition, "point lies on a watershed of a vertex-rooted map");
    }
  }
}

CardinalAreas cardinal_areas(const VisibilityGraph& graph, const ShortestPathMap& spm) {
  const PolygonalDomain& d = graph.domain();
  const double tol = tol_of(d);
  const Point z = spm.source;
  CardinalAreas out;
  for (const SpmCell& cell : spm.cells) {
    if (cell.region.empty()) continue;
    // Direction of the first move off z's vertical (horizontal) line.
    int sx = 0;
    int sy = 0;
    for (int v : root_path(spm.labels, cell.root)) {
      const Point p = d.vertices()[static_cast<std::size_t>(v)];
      if (sx == 0 && std::abs(p.x - z.x) > tol) sx = p.x > z.x ? 1 : -1;
      if (sy == 0 && std::abs(p.y - z.y) > tol) sy = p.y > z.y ? 1 : -1;
    }
    if (sx < 0) {
      out.w += cell.area;
    } else if (sx > 0) {
      out.e += cell.area;
    } else {
      const double left = area_left_of(cell.region, z.x);
      out.w += left;
      out.e += cell.area - left;
    }
    if (sy < 0) {
      out.s += cell.area;
    } else if (sy > 0) {
      out.n += cell.area;
    } else {
      const double below = area_below_y(cell.region, z.y);
      out.s += below;
      out.n += cell.area - below;
    }
  }
  return out;
}

CardinalAreas cardinal_areas(const VisibilityGraph& graph, Point z, Metric metric) {
  const PolygonalDomain& d = graph.domain();
  if (!contains(d, z)) throw Error(ErrorCode::kPointOutsideDomain, "point lies outside the domain");
  if (metric == Metric::kStraight) {
    Region whole{Polygon{d.outer(), {d.holes().begin(), d.holes().end()}}};
    CardinalAreas out;
    out.w = area_left_of(whole, z.x);
    out.e = d.area() - out.w;
    out.s = area_below_y(whole, z.y);
    out.n = d.area() - out.s;
    return out;
  }
  const ShortestPathMap spm = build_spm(graph, z);
  check_regular_position(graph, spm.labels);
  return cardinal_areas(graph, spm);
}

}  // namespace l1m
