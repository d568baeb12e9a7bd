#include "l1median/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "l1median/error.hpp"

namespace l1m {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Point-in-domain, segment clearance and vertex Dijkstra, written without
// reference to the spm module so that both can be checked against each other.
class Engine {
 public:
  explicit Engine(const PolygonalDomain& d) {
    for (const Ring& ring : d.rings()) {
      for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point a = ring[i], b = ring[(i + 1) % ring.size()];
        segs_.push_back({a, b, b.x - a.x, b.y - a.y, 1.0 / std::hypot(b.x - a.x, b.y - a.y)});
        verts_.push_back(ring[i]);
      }
    }
    double x0 = kInf, y0 = kInf, x1 = -kInf, y1 = -kInf;
    for (Point p : verts_) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
    band_ = 1e-9 * std::max(1.0, std::hypot(x1 - x0, y1 - y0));
    const std::size_t n = verts_.size();
    vv_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        vv_[i * n + j] = vv_[j * n + i] = (i == j || clear(verts_[i], verts_[j])) ? 1 : 0;
      }
    }
  }

  const std::vector<Point>& vertices() const { return verts_; }

  bool inside(Point p) const {
    bool odd = false;
    for (const Seg& sg : segs_) {
      const Point a = sg.a, b = sg.b;
      if (seg_dist2(p, sg) <= band_ * band_) return true;
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
        if (x > p.x) odd = !odd;
      }
    }
    return odd;
  }

  // True when the closed segment ab lies in the closed domain.
  bool clear(Point a, Point b) const {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len = std::hypot(dx, dy);
    if (len <= band_) return inside(a);
    const double tol = band_ * len;
    double ts[64];
    std::size_t nt = 0;
    bool grazing = false;
    for (const Seg& sg : segs_) {
      const double s1 = dx * (sg.a.y - a.y) - dy * (sg.a.x - a.x);
      const double s2 = dx * (sg.b.y - a.y) - dy * (sg.b.x - a.x);
      if ((s1 > tol && s2 > tol) || (s1 < -tol && s2 < -tol)) continue;
      const double s3 = (sg.ex * (a.y - sg.a.y) - sg.ey * (a.x - sg.a.x)) * sg.inv_len;
      const double s4 = (sg.ex * (b.y - sg.a.y) - sg.ey * (b.x - sg.a.x)) * sg.inv_len;
      const bool straddle1 = (s1 > tol && s2 < -tol) || (s1 < -tol && s2 > tol);
      const bool straddle2 = (s3 > band_ && s4 < -band_) || (s3 < -band_ && s4 > band_);
      if (straddle1 && straddle2) return false;
      if (std::abs(s1) <= tol) {
        const double t = ((sg.a.x - a.x) * dx + (sg.a.y - a.y) * dy) / (len * len);
        if (t > 0.0 && t < 1.0) {
          grazing = true;
          if (nt < 64) ts[nt++] = t;
        }
      }
    }
    if (!grazing) return inside({a.x + 0.5 * dx, a.y + 0.5 * dy});
    ts[nt++] = 0.0;
    ts[nt++] = 1.0;
    std::sort(ts, ts + nt);
    for (std::size_t i = 0; i + 1 < nt; ++i) {
      if ((ts[i + 1] - ts[i]) * len <= band_) continue;
      const double t = 0.5 * (ts[i] + ts[i + 1]);
      if (!inside({a.x + t * dx, a.y + t * dy})) return false;
    }
    return true;
  }

  // Geodesic distance from z to every vertex.
  std::vector<double> labels(Point z) const {
    const std::size_t n = verts_.size();
    std::vector<double> dist(n, kInf);
    std::vector<std::uint8_t> done(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (clear(z, verts_[i])) dist[i] = std::abs(z.x - verts_[i].x) + std::abs(z.y - verts_[i].y);
    }
    for (std::size_t it = 0; it < n; ++it) {
      std::size_t u = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (!done[i] && std::isfinite(dist[i]) && (u == n || dist[i] < dist[u])) u = i;
      }
      if (u == n) break;
      done[u] = 1;
      for (std::size_t w = 0; w < n; ++w) {
        if (done[w] || !vv_[u * n + w]) continue;
        const double nd = dist[u] + std::abs(verts_[u].x - verts_[w].x) + std::abs(verts_[u].y - verts_[w].y);
        dist[w] = std::min(dist[w], nd);
      }
    }
    return dist;
  }

  // d(z, p) given the labels of z; `sees` answers vertex-to-p visibility.
  template <typename Sees>
  double distance(const std::vector<double>& lab, Point z, Point p, Sees&& sees) const {
    // Routes via vertices never beat the straight distance, so the direct
    // visibility test is only needed when they are all longer.
    const double direct = std::abs(z.x - p.x) + std::abs(z.y - p.y);
    double best = kInf;
    for (std::size_t v = 0; v < verts_.size(); ++v) {
      const double cand = lab[v] + std::abs(verts_[v].x - p.x) + std::abs(verts_[v].y - p.y);
      if (cand < best && sees(v)) best = cand;
    }
    if (best <= direct) return best;
    return clear(z, p) ? direct : best;
  }

  double distance(const std::vector<double>& lab, Point z, Point p) const {
    return distance(lab, z, p, [&](std::size_t v) { return clear(verts_[v], p); });
  }

 private:
  struct Seg {
    Point a;
    Point b;
    double ex, ey, inv_len;
  };

  static double seg_dist2(Point p, const Seg& s) {
    double t = ((p.x - s.a.x) * s.ex + (p.y - s.a.y) * s.ey) * s.inv_len * s.inv_len;
    t = std::clamp(t, 0.0, 1.0);
    const double qx = p.x - s.a.x - t * s.ex, qy = p.y - s.a.y - t * s.ey;
    return qx * qx + qy * qy;
  }
  std::vector<Seg> segs_;
  std::vector<Point> verts_;
  std::vector<std::uint8_t> vv_;
  double band_ = 0.0;
};

// Does segment ab meet the axis-aligned rectangle? (Liang-Barsky.)
bool segment_hits_box(Point a, Point b, double x0, double y0, double x1, double y1) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - x0, x1 - a.x, a.y - y0, y1 - a.y};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return false;
      continue;
    }
    const double r = q[k] / p[k];
    if (p[k] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) return false;
  }
  return true;
}

// Integration samples and the candidate grid of one domain at one resolution.
class Grid {
 public:
  Grid(const PolygonalDomain& d, const Engine& eng, int n) : eng_(eng) {
    x0_ = d.min_x();
    y0_ = d.min_y();
    h_ = std::max(d.max_x() - d.min_x(), d.max_y() - d.min_y()) / n;
    nx_ = std::max(1, static_cast<int>(std::ceil((d.max_x() - x0_) / h_ - 1e-9)));
    ny_ = std::max(1, static_cast<int>(std::ceil((d.max_y() - y0_) / h_ - 1e-9)));
    std::vector<std::uint8_t> edge_cell(static_cast<std::size_t>(nx_) * ny_, 0);
    for (const Ring& ring : d.rings()) {
      for (std::size_t k = 0; k < ring.size(); ++k) {
        const Point a = ring[k], b = ring[(k + 1) % ring.size()];
        const int i0 = std::clamp(static_cast<int>(std::floor((std::min(a.x, b.x) - x0_) / h_)) - 1, 0, nx_ - 1);
        const int i1 = std::clamp(static_cast<int>(std::floor((std::max(a.x, b.x) - x0_) / h_)) + 1, 0, nx_ - 1);
        const int j0 = std::clamp(static_cast<int>(std::floor((std::min(a.y, b.y) - y0_) / h_)) - 1, 0, ny_ - 1);
        const int j1 = std::clamp(static_cast<int>(std::floor((std::max(a.y, b.y) - y0_) / h_)) + 1, 0, ny_ - 1);
        for (int i = i0; i <= i1; ++i) {
          for (int j = j0; j <= j1; ++j) {
            if (segment_hits_box(a, b, x0_ + i * h_, y0_ + j * h_, x0_ + (i + 1) * h_, y0_ + (j + 1) * h_)) {
              edge_cell[index(i, j)] = 1;
            }
          }
        }
      }
    }
    cand_.assign(edge_cell.size(), -1);
    const double w_full = h_ * h_;
    const double w_sub = w_full / 16.0;
    for (int i = 0; i < nx_; ++i) {
      for (int j = 0; j < ny_; ++j) {
        const Point c = center(i, j);
        const bool feasible = eng_.inside(c);
        if (feasible) {
          cand_[index(i, j)] = static_cast<int>(cand_pts_.size());
          cand_pts_.push_back(c);
          cand_ij_.push_back({i, j});
        }
        if (edge_cell[index(i, j)]) {
          for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
              const Point p{x0_ + (i + (a + 0.5) / 4.0) * h_, y0_ + (j + (b + 0.5) / 4.0) * h_};
              if (eng_.inside(p)) add_sample(p, w_sub);
            }
          }
        } else if (feasible) {
          add_sample(c, w_full);
        }
      }
    }
  }

  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const std::vector<Point>& samples() const { return pts_; }
  const std::vector<Point>& candidates() const { return cand_pts_; }
  int candidate_at(int i, int j) const { return cand_[index(i, j)]; }
  std::pair<int, int> cell_of(int cand) const { return cand_ij_[static_cast<std::size_t>(cand)]; }

  double straight(Point z) const {
    double s = 0.0;
    for (std::size_t k = 0; k < pts_.size(); ++k) {
      s += w_[k] * (std::abs(pts_[k].x - z.x) + std::abs(pts_[k].y - z.y));
    }
    return s / total_;
  }

  // Straight estimate at every candidate via sorted marginals.
  std::vector<double> straight_all() const {
    auto marginal = [&](bool use_x) {
      std::vector<std::pair<double, double>> v;
      v.reserve(pts_.size());
      for (std::size_t k = 0; k < pts_.size(); ++k) v.push_back({use_x ? pts_[k].x : pts_[k].y, w_[k]});
      std::sort(v.begin(), v.end());
      std::vector<double> cw(v.size() + 1, 0.0), cwx(v.size() + 1, 0.0);
      for (std::size_t k = 0; k < v.size(); ++k) {
        cw[k + 1] = cw[k] + v[k].second;
        cwx[k + 1] = cwx[k] + v[k].second * v[k].first;
      }
      return [v = std::move(v), cw = std::move(cw), cwx = std::move(cwx)](double t) {
        const std::size_t k = static_cast<std::size_t>(
            std::lower_bound(v.begin(), v.end(), std::make_pair(t, -kInf)) - v.begin());
        const double left = t * cw[k] - cwx[k];
        const double right = (cwx.back() - cwx[k]) - t * (cw.back() - cw[k]);
        return left + right;
      };
    };
    const auto gx = marginal(true);
    const auto gy = marginal(false);
    std::vector<double> out(cand_pts_.size());
    for (std::size_t c = 0; c < cand_pts_.size(); ++c) {
      out[c] = (gx(cand_pts_[c].x) + gy(cand_pts_[c].y)) / total_;
    }
    return out;
  }

  void prepare_geodesic() {
    const std::size_t n = eng_.vertices().size();
    vis_.assign(n, std::vector<std::uint8_t>(pts_.size(), 0));
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t k = 0; k < pts_.size(); ++k) vis_[v][k] = eng_.clear(eng_.vertices()[v], pts_[k]) ? 1 : 0;
    }
  }

  double geodesic(Point z, const std::vector<double>& lab) const {
    double s = 0.0;
    for (std::size_t k = 0; k < pts_.size(); ++k) {
      const double d = eng_.distance(lab, z, pts_[k], [&](std::size_t v) { return vis_[v][k] != 0; });
      s += w_[k] * d;
    }
    return s / total_;
  }

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * ny_ + j; }
  Point center(int i, int j) const { return {x0_ + (i + 0.5) * h_, y0_ + (j + 0.5) * h_}; }
  void add_sample(Point p, double w) {
    pts_.push_back(p);
    w_.push_back(w);
    total_ += w;
  }

  const Engine& eng_;
  double x0_ = 0.0, y0_ = 0.0, h_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<Point> pts_;
  std::vector<double> w_;
  double total_ = 0.0;
  std::vector<int> cand_;
  std::vector<Point> cand_pts_;
  std::vector<std::pair<int, int>> cand_ij_;
  std::vector<std::vector<std::uint8_t>> vis_;
};

}  // namespace

GridSpec make_grid(const PolygonalDomain& domain, int n) {
  if (n < 16) throw Error(ErrorCode::kBadInput, "grid resolution must be at least 16");
  return GridSpec{n, kOracleErrorConstant * domain.diameter() / n};
}

OracleEstimate integrate_average(const PolygonalDomain& domain, Point z, Metric metric,
                                 const GridSpec& grid) {
  if (grid.resolution < 16) throw Error(ErrorCode::kBadInput, "grid resolution must be at least 16");
  const Engine eng(domain);
  if (!eng.inside(z)) throw Error(ErrorCode::kPointOutsideDomain, "point lies outside the domain");
  Grid g(domain, eng, grid.resolution);
  OracleEstimate out;
  out.error_bound = grid.error_bound;
  if (metric == Metric::kStraight) {
    out.estimate = g.straight(z);
  } else {
    g.prepare_geodesic();
    out.estimate = g.geodesic(z, eng.labels(z));
  }
  return out;
}

OracleOptimum grid_search_optimum(const PolygonalDomain& domain, Metric metric, const GridSpec& grid) {
  if (grid.resolution < 16) throw Error(ErrorCode::kBadInput, "grid resolution must be at least 16");
  const Engine eng(domain);
  Grid g(domain, eng, grid.resolution);
  const auto& cands = g.candidates();
  OracleOptimum out;
  out.slack = 2.0 * g.h();
  out.error_bound = grid.error_bound;
  const std::vector<double> straight = g.straight_all();
  auto finish = [&](std::size_t best, double value) {
    out.point = cands[best];
    out.value = value;
    out.lower = value - out.slack - out.error_bound;
    out.upper = value + out.error_bound;
    return out;
  };
  if (cands.empty()) throw Error(ErrorCode::kBadInput, "grid too coarse for the domain");
  if (metric == Metric::kStraight) {
    const auto it = std::min_element(straight.begin(), straight.end());
    out.evaluations = straight.size();
    return finish(static_cast<std::size_t>(it - straight.begin()), *it);
  }

  // Geodesic: best-first branch and bound over blocks of grid cells. The
  // grid estimate dominates its straight counterpart and is 1-Lipschitz in
  // the geodesic metric.
  g.prepare_geodesic();
  std::vector<double> value(cands.size(), std::numeric_limits<double>::quiet_NaN());
  double incumbent = kInf;
  std::size_t best = 0;
  auto evaluate = [&](std::size_t c) {
    if (std::isnan(value[c])) {
      value[c] = g.geodesic(cands[c], eng.labels(cands[c]));
      ++out.evaluations;
      if (value[c] < incumbent || (value[c] == incumbent && c < best)) {
        incumbent = value[c];
        best = c;
      }
    }
    return value[c];
  };
  struct Block {
    int i0, i1, j0, j1;  // half-open cell ranges
    double lb;
    bool operator>(const Block& o) const { return lb > o.lb; }
  };
  std::priority_queue<Block, std::vector<Block>, std::greater<>> pq;
  pq.push({0, g.nx(), 0, g.ny(), *std::min_element(straight.begin(), straight.end())});
  std::vector<double> lb(cands.size(), 0.0);
  while (!pq.empty()) {
    const Block b = pq.top();
    pq.pop();
    if (b.lb >= incumbent) break;
    std::vector<std::size_t> members;
    for (int i = b.i0; i < b.i1; ++i) {
      for (int j = b.j0; j < b.j1; ++j) {
        const int c = g.candidate_at(i, j);
        if (c >= 0) members.push_back(static_cast<std::size_t>(c));
      }
    }
    if (members.empty()) continue;
    if (members.size() == 1) {
      evaluate(members[0]);
      continue;
    }
    // Representative: the member nearest the block centre.
    const double ci = 0.5 * (b.i0 + b.i1 - 1), cj = 0.5 * (b.j0 + b.j1 - 1);
    std::size_t rep = members[0];
    double rep_d = kInf;
    for (std::size_t m : members) {
      const auto [i, j] = g.cell_of(static_cast<int>(m));
      const double dd = std::abs(i - ci) + std::abs(j - cj);
      if (dd < rep_d) {
        rep_d = dd;
        rep = m;
      }
    }
    const double fr = evaluate(rep);
    const std::vector<double> lab = eng.labels(cands[rep]);
    for (std::size_t m : members) {
      // The excess over the straight estimate is 2-Lipschitz.
      const double dist = eng.distance(lab, cands[rep], cands[m]);
      const double excess = fr - straight[rep];
      lb[m] = std::max({straight[m], fr - dist, straight[m] + excess - 2.0 * dist});
    }
    const int im = (b.i0 + b.i1) / 2, jm = (b.j0 + b.j1) / 2;
    const int is[3] = {b.i0, im, b.i1};
    const int js[3] = {b.j0, jm, b.j1};
    for (int a = 0; a < 2; ++a) {
      for (int c = 0; c < 2; ++c) {
        Block child{is[a], is[a + 1], js[c], js[c + 1], kInf};
        if (child.i0 >= child.i1 || child.j0 >= child.j1) continue;
        for (std::size_t m : members) {
          const auto [i, j] = g.cell_of(static_cast<int>(m));
          if (i >= child.i0 && i < child.i1 && j >= child.j0 && j < child.j1) child.lb = std::min(child.lb, lb[m]);
        }
        if (child.lb < incumbent) pq.push(child);
      }
    }
  }
  return finish(best, incumbent);
}

double oracle_geodesic_distance(const PolygonalDomain& domain, Point a, Point b) {
  const Engine eng(domain);
  if (!eng.inside(a) || !eng.inside(b)) {
    throw Error(ErrorCode::kPointOutsideDomain, "point lies outside the domain");
  }
  return eng.distance(eng.labels(a), a, b);
}

}  // namespace l1m
