#include "l1median/solver_straight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "l1median/objective.hpp"
#include "l1median/poly.hpp"
#include "l1median/trapezoid.hpp"

namespace l1m {

namespace {

double tol_of(const PolygonalDomain& d) { return 1e-9 * std::max(1.0, d.diameter()); }

// Liang-Barsky test of segment ab against the closed box [lo, hi].
bool segment_hits_box(Point a, Point b, Point lo, Point hi) {
  if (lo.x > hi.x || lo.y > hi.y) return false;
  double t0 = 0.0;
  double t1 = 1.0;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - lo.x, hi.x - a.x, a.y - lo.y, hi.y - a.y};
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

bool boundary_hits_box(const PolygonalDomain& d, Point lo, Point hi) {
  for (const Edge& e : d.edges()) {
    if (segment_hits_box(e.a, e.b, lo, hi)) return true;
  }
  return false;
}

// Some boundary point other than the corner c lies in the rectangle spanned
// by z and c.
bool corner_dominated(const PolygonalDomain& d, Point z, Point c, double tol) {
  const double sx = c.x >= z.x ? 1.0 : -1.0;
  const double sy = c.y >= z.y ? 1.0 : -1.0;
  auto box = [&](Point far) {
    return boundary_hits_box(d, {std::min(z.x, far.x), std::min(z.y, far.y)},
                             {std::max(z.x, far.x), std::max(z.y, far.y)});
  };
  const bool x_room = sx * (c.x - z.x) > tol;
  const bool y_room = sy * (c.y - z.y) > tol;
  return (x_room && box({c.x - sx * tol, c.y})) || (y_room && box({c.x, c.y - sy * tol}));
}

}  // namespace

L1Origin l1_origin(const PolygonalDomain& domain) {
  const double half = 0.5 * domain.area();
  const Point z{area_quantile(trapezoidize(domain, Axis::kVertical), half),
                area_quantile(trapezoidize(domain, Axis::kHorizontal), half)};
  return {z, contains(domain, z)};
}

std::vector<BoundaryPiece> boundary_pieces(const PolygonalDomain& domain, Point origin) {
  std::vector<double> xs{origin.x};
  std::vector<double> ys{origin.y};
  for (const Point& v : domain.vertices()) {
    xs.push_back(v.x);
    ys.push_back(v.y);
  }
  const double tol = tol_of(domain);
  std::vector<BoundaryPiece> out;
  for (const Edge& e : domain.edges()) {
    std::vector<double> ts{0.0, 1.0};
    auto cut = [&](const std::vector<double>& cs, double a, double b) {
      for (double c : cs) {
        if ((c - a) * (c - b) < 0.0) ts.push_back((c - a) / (b - a));
      }
    };
    cut(xs, e.a.x, e.b.x);
    cut(ys, e.a.y, e.b.y);
    std::sort(ts.begin(), ts.end());
    const double len = euclid(e.a, e.b);
    std::vector<double> uniq;
    for (double t : ts) {
      if (uniq.empty() || (t - uniq.back()) * len > tol) uniq.push_back(t);
    }
    uniq.back() = 1.0;
    for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
      const double t0 = uniq[i];
      const double t1 = uniq[i + 1];
      out.push_back({e.id, t0, t1, e.a + t0 * (e.b - e.a), e.a + t1 * (e.b - e.a)});
    }
  }
  return out;
}

std::vector<BoundaryPiece> dominated_boundary(const PolygonalDomain& domain, const L1Origin& origin) {
  std::vector<BoundaryPiece> pieces = boundary_pieces(domain, origin.point);
  if (origin.feasible) return pieces;
  const double tol = tol_of(domain);
  const Point z = origin.point;
  std::vector<BoundaryPiece> out;
  for (BoundaryPiece p : pieces) {
    const Point mid = 0.5 * (p.a + p.b);
    const double sx = mid.x >= z.x ? 1.0 : -1.0;
    const double sy = mid.y >= z.y ? 1.0 : -1.0;
    const double xa = sx * (p.a.x - z.x), ya = sy * (p.a.y - z.y);
    const double xb = sx * (p.b.x - z.x), yb = sy * (p.b.y - z.y);
    if (xb >= xa - tol && yb >= ya - tol) {
      p = {p.edge, p.t0, p.t0, p.a, p.a};
    } else if (xa >= xb - tol && ya >= yb - tol) {
      p = {p.edge, p.t1, p.t1, p.b, p.b};
    }
    const Point corner{z.x + sx * std::min(xa, xb), z.y + sy * std::min(ya, yb)};
    if (!corner_dominated(domain, z, corner, tol)) out.push_back(p);
  }
  return out;
}

SolveResult solve_straight(const PolygonalDomain& domain, const StraightOptions& options) {
  const Evaluator eval(domain, Metric::kStraight);
  const L1Origin origin = l1_origin(domain);
  const double tol = tol_of(domain);
  std::vector<Candidate> cands;
  if (origin.feasible) {
    cands.push_back({origin.point, eval.f(origin.point).value, Provenance::kL1Origin});
    return finish_result("l1-straight", std::move(cands), tol, 1);
  }

  const std::vector<BoundaryPiece> pieces =
      options.prune ? dominated_boundary(domain, origin) : boundary_pieces(domain, origin.point);
  for (const BoundaryPiece& p : pieces) {
    cands.push_back({p.a, 0.0, Provenance::kOverlayVertex});
    if (p.t1 <= p.t0) continue;
    cands.push_back({p.b, 0.0, Provenance::kOverlayVertex});
    // The derivative along the piece is quadratic in the parameter; recover
    // it from three interior samples centred on u = 0.
    const Point s = p.b - p.a;
    auto slope = [&](double tau) {
      const Gradient g = eval.gradient(p.a + tau * s);
      return g.fx * s.x + g.fy * s.y;
    };
    constexpr double h = 0.25;
    const double g1 = slope(0.5 - h), g2 = slope(0.5), g3 = slope(0.5 + h);
    const double c1 = (g3 - g1) / (2.0 * h);
    const double c2 = (g3 - 2.0 * g2 + g1) / (2.0 * h * h);
    for (double u : solve_quadratic(c2, c1, g2)) {
      double tau = u + 0.5;
      if (tau < -1e-12 || tau > 1.0 + 1e-12) continue;
      tau = std::clamp(tau, 0.0, 1.0);
      cands.push_back({p.a + tau * s, 0.0, Provenance::kEdgeInterior, p.edge, p.t0 + tau * (p.t1 - p.t0)});
    }
  }

  // Nearest boundary points straight left, right, below and above the origin.
  const Point z = origin.point;
  for (const Point dir : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}}) {
    double best = std::numeric_limits<double>::infinity();
    Candidate hit;
    for (const Edge& e : domain.edges()) {
      const Point d = e.b - e.a;
      const double den = cross(dir, d);
      if (den == 0.0) continue;
      const double r = cross(e.a - z, d) / den;
      const double t = cross(e.a - z, dir) / den;
      if (r < 0.0 || t < 0.0 || t > 1.0 || r >= best) continue;
      best = r;
      hit = {e.a + t * d, 0.0, Provenance::kEdgeInterior, e.id, t};
    }
    if (std::isfinite(best)) cands.push_back(hit);
  }

  for (Candidate& c : cands) c.value = eval.f(c.point).value;
  const std::size_t evaluated = cands.size();
  return finish_result("l1-straight", std::move(cands), tol, evaluated);
}

}  // namespace l1m
