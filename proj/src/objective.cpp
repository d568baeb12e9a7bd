#include "l1median/objective.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "l1median/region.hpp"
#include "l1median/trapezoid.hpp"

namespace l1m {

namespace {

// Mean distance from A over a triangle with horizontal side AB and apex C,
// the triangle lying in quadrant (sx, sy) of z. Offsets are signed so the
// identity also holds when C projects outside AB; L1 is linear on a quadrant.
double quadrant_part(Point a, Point b, Point c, Point z, double sx, double sy) {
  const double area = 0.5 * std::abs(b.x - a.x) * std::abs(c.y - a.y);
  if (area == 0.0) return 0.0;
  if (sx * (b.x - a.x) < 0.0) std::swap(a, b);
  const double base = sx * (b.x - a.x);
  const double foot = sx * (c.x - a.x);
  const double height = sy * (c.y - a.y);
  const double offset = sx * (a.x - z.x) + sy * (a.y - z.y);
  return area * (offset + (base + foot + height) / 3.0);
}

double quadrant_triangle(Point p0, Point p1, Point p2, Point z, double sx, double sy) {
  if (p1.y < p0.y) std::swap(p0, p1);
  if (p2.y < p1.y) std::swap(p1, p2);
  if (p1.y < p0.y) std::swap(p0, p1);
  const double span = p2.y - p0.y;
  if (span <= 0.0) return 0.0;
  const double t = (p1.y - p0.y) / span;
  const Point m{p0.x + t * (p2.x - p0.x), p1.y};
  return quadrant_part(p1, m, p0, z, sx, sy) + quadrant_part(p1, m, p2, z, sx, sy);
}

double signed_ring_distance(const Ring& ring, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    best = std::min(best, point_segment_distance(p, ring[i], ring[(i + 1) % ring.size()]));
  }
  return point_in_ring(ring, p) ? best : -best;
}

// Expands c0 + c1 u + c2 u² + c3 u³ with u = (x - x0) / s into powers of x.
std::array<double, 4> to_global(const double* c, double x0, double s) {
  const double a = 1.0 / s;
  const double b = -x0 / s;
  return {c[0] + c[1] * b + c[2] * b * b + c[3] * b * b * b,
          c[1] * a + 2.0 * c[2] * a * b + 3.0 * c[3] * a * b * b,
          c[2] * a * a + 3.0 * c[3] * a * a * b,
          c[3] * a * a * a};
}

}  // namespace

double triangle_average(Point a, Point b, Point c) {
  const double scale = std::max({1.0, std::abs(a.x), std::abs(a.y), std::abs(b.x), std::abs(b.y),
                                 std::abs(c.x), std::abs(c.y)});
  const double tol = 1e-12 * scale;
  if (std::abs(a.y - b.y) > tol) throw Error(ErrorCode::kNonHorizontalBase, "AB is not horizontal");
  const double base = std::abs(b.x - a.x);
  const double height = std::abs(c.y - a.y);
  if (base <= tol || height <= tol) throw Error(ErrorCode::kDegenerateTriangle, "triangle has no area");
  const double sx = b.x > a.x ? 1.0 : -1.0;
  const double foot = sx * (c.x - a.x);
  if (foot < -tol) throw Error(ErrorCode::kApexOutsideQuadrant, "apex projects behind A");
  return (base + std::max(foot, 0.0) + height) / 3.0;
}

double convex_l1_integral(const Ring& convex, Point z) {
  double total = 0.0;
  for (double sx : {-1.0, 1.0}) {
    const Ring half = clip_convex(convex, HalfPlane{sx, 0.0, -sx * z.x});
    if (half.size() < 3) continue;
    for (double sy : {-1.0, 1.0}) {
      const Ring q = clip_convex(half, HalfPlane{0.0, sy, -sy * z.y});
      for (std::size_t k = 1; k + 1 < q.size(); ++k) {
        total += quadrant_triangle(q[0], q[k], q[k + 1], z, sx, sy);
      }
    }
  }
  return total;
}

Evaluator::Evaluator(const PolygonalDomain& domain, Metric metric) : domain_(domain), metric_(metric) {
  for (const Trapezoid& t : trapezoidize(domain_, Axis::kVertical).trapezoids) {
    if (t.polygon.size() >= 3) pieces_.push_back(t.polygon);
  }
  if (metric_ == Metric::kGeodesic) graph_ = std::make_shared<const VisibilityGraph>(domain_);
}

const VisibilityGraph& Evaluator::graph() const {
  if (!graph_) throw std::logic_error("straight-line evaluator has no visibility graph");
  return *graph_;
}

ObjectiveValue Evaluator::f(Point z) const {
  if (!contains(domain_, z)) throw Error(ErrorCode::kPointOutsideDomain, "point lies outside the domain");
  double total = 0.0;
  if (metric_ == Metric::kStraight) {
    for (const Ring& piece : pieces_) total += convex_l1_integral(piece, z);
  } else {
    const ShortestPathMap spm = build_spm(*graph_, z, SpmDetail::kCells);
    for (const SpmCell& cell : spm.cells) {
      for (const Polygon& poly : cell.region) {
        total += cell.root_dist * std::abs(signed_area(poly.outer)) +
                 convex_l1_integral(poly.outer, cell.root_point);
      }
    }
  }
  return {total / domain_.area(), metric_};
}

Gradient Evaluator::gradient(Point z) const {
  if (!contains(domain_, z)) throw Error(ErrorCode::kPointOutsideDomain, "point lies outside the domain");
  CardinalAreas a;
  if (metric_ == Metric::kStraight) {
    Region whole;
    for (const Ring& piece : pieces_) whole.push_back(Polygon{piece, {}});
    a.w = area_left_of(whole, z.x);
    a.e = domain_.area() - a.w;
    a.s = area_below_y(whole, z.y);
    a.n = domain_.area() - a.s;
  } else {
    const ShortestPathMap spm = build_spm(*graph_, z, SpmDetail::kCells);
    check_regular_position(*graph_, spm.labels);
    a = cardinal_areas(*graph_, spm);
  }
  const double mu = domain_.area();
  return {(a.w - a.e) / mu, (a.s - a.n) / mu};
}

ObjectiveValue evaluate_f(const PolygonalDomain& domain, Point z, Metric metric) {
  return Evaluator(domain, metric).f(z);
}

Gradient gradient_f(const PolygonalDomain& domain, Point z, Metric metric) {
  return Evaluator(domain, metric).gradient(z);
}

bool ring_contains(const Ring& ring, Point p, double tol) {
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (point_segment_distance(p, ring[i], ring[(i + 1) % ring.size()]) <= tol) return true;
  }
  return point_in_ring(ring, p);
}

InteriorCentre interior_centre(const Ring& ring) {
  Point lo = ring.front();
  Point hi = ring.front();
  for (const Point& p : ring) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const double w = hi.x - lo.x;
  const double h = hi.y - lo.y;
  constexpr int kGrid = 24;
  InteriorCentre best{0.5 * (lo + hi), -std::numeric_limits<double>::infinity()};
  const Moments m = ring_moments(ring);
  if (m.area != 0.0) {
    const Point c{m.mx / m.area, m.my / m.area};
    best = {c, signed_ring_distance(ring, c)};
  }
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const Point p{lo.x + (i + 0.5) * w / kGrid, lo.y + (j + 0.5) * h / kGrid};
      const double d = signed_ring_distance(ring, p);
      if (d > best.radius) best = {p, d};
    }
  }
  // Compass search from the best grid point. Gains below `gain` do not
  // count as a move, otherwise the search can creep along a flat ridge.
  double step = std::max(w, h) / kGrid;
  const double stop = 1e-6 * std::max(w, h);
  const double gain = 1e-12 * std::max(w, h);
  for (int iter = 0; step > stop && iter < 10000; ++iter) {
    bool moved = false;
    for (int k = 0; k < 8; ++k) {
      const double ang = k * std::numbers::pi / 4.0;
      const Point p = best.point + step * Point{std::cos(ang), std::sin(ang)};
      const double d = signed_ring_distance(ring, p);
      if (d > best.radius + gain) {
        best = {p, d};
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  best.radius = std::max(best.radius, 0.0);
  return best;
}

double CubicPair::value_unchecked(Point p) const {
  const double u = (p.x - centre.x) / scale;
  const double v = (p.y - centre.y) / scale;
  return lx[0] + u * (lx[1] + u * (lx[2] + u * lx[3])) + v * (ly[1] + v * (ly[2] + v * ly[3])) +
         u * v * (lm[0] + lm[1] * u + lm[2] * v);
}

double CubicPair::operator()(Point p) const {
  if (!ring_contains(cell, p, 1e-9 * std::max(1.0, scale))) {
    throw Error(ErrorCode::kOutsideCell, "point is outside the cell of this cubic");
  }
  return value_unchecked(p);
}

Gradient CubicPair::gradient(Point p) const {
  const double u = (p.x - centre.x) / scale;
  const double v = (p.y - centre.y) / scale;
  return {(lx[1] + 2.0 * lx[2] * u + 3.0 * lx[3] * u * u + lm[0] * v + 2.0 * lm[1] * u * v +
           lm[2] * v * v) / scale,
          (ly[1] + 2.0 * ly[2] * v + 3.0 * ly[3] * v * v + lm[0] * u + lm[1] * u * u +
           2.0 * lm[2] * u * v) / scale};
}

bool CubicPair::separable() const {
  const double tol = 1e-9 * std::max(std::abs(f_scale), 1e-300);
  return std::abs(lm[0]) <= tol && std::abs(lm[1]) <= tol && std::abs(lm[2]) <= tol;
}

namespace {

using Basis = Eigen::Matrix<double, 10, 1>;

// 1, u, u², u³, v, v², v³, uv, u²v, uv²
Basis monomials(double u, double v) {
  Basis b;
  b << 1.0, u, u * u, u * u * u, v, v * v, v * v * v, u * v, u * u * v, u * v * v;
  return b;
}

// Sample points spread over the whole cell: the centre, points part way
// towards every vertex and edge midpoint, and a coarse grid. Sampling only a
// small disc around the centre turns every held-out point of a long thin
// cell into an extrapolation. Returns at most `cap` points, picked farthest
// first so they stay spread out.
std::vector<Point> fit_samples(const Ring& cell, Point centre, std::size_t cap) {
  std::vector<Point> pool{centre};
  auto add = [&](Point p) {
    if (ring_contains(cell, p, 0.0)) pool.push_back(p);
  };
  for (std::size_t i = 0; i < cell.size(); ++i) {
    const Point v = cell[i];
    const Point m = 0.5 * (cell[i] + cell[(i + 1) % cell.size()]);
    for (double t : {0.2, 0.45, 0.7, 0.9}) add(centre + t * (v - centre));
    for (double t : {0.5, 0.9}) add(centre + t * (m - centre));
  }
  Point lo = cell.front(), hi = cell.front();
  for (const Point& p : cell) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) add({lo.x + (i + 0.5) / 5 * (hi.x - lo.x), lo.y + (j + 0.5) / 5 * (hi.y - lo.y)});
  }

  std::vector<Point> out{pool.front()};
  std::vector<double> gap(pool.size(), std::numeric_limits<double>::infinity());
  while (out.size() < std::min(cap, pool.size())) {
    std::size_t best = 0;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      gap[k] = std::min(gap[k], euclid(pool[k], out.back()));
      if (gap[k] > gap[best]) best = k;
    }
    if (gap[best] <= 0.0) break;
    out.push_back(pool[best]);
  }
  return out;
}

}  // namespace

CubicPair fit_cell_cubic(const Evaluator& eval, const Ring& cell) {
  const InteriorCentre ic = interior_centre(cell);
  if (ic.radius < 1e-7 * eval.domain().diameter()) {
    throw Error(ErrorCode::kCellTooThin, "cell inradius below 1e-7 * diameter");
  }
  Point lo = cell.front(), hi = cell.front();
  for (const Point& p : cell) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  CubicPair out;
  out.cell = cell;
  out.centre = ic.point;
  out.scale = 0.5 * std::max(hi.x - lo.x, hi.y - lo.y);

  const std::vector<Point> samples = fit_samples(cell, ic.point, 16);
  if (samples.size() < 10) throw Error(ErrorCode::kIllConditionedFit, "too few samples inside the cell");
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd m(n, 10);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Point p = samples[static_cast<std::size_t>(k)];
    m.row(k) = monomials((p.x - ic.point.x) / out.scale, (p.y - ic.point.y) / out.scale).transpose();
    rhs(k) = eval.f(p).value;
  }
  out.f_scale = rhs(0);
  // Equilibrate columns: in a thin cell the v powers are tiny but still
  // determined by the data.
  const Eigen::VectorXd norms = m.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < 10; ++j) m.col(j) /= norms(j);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (!(sv(9) > 1e-12 * sv(0))) throw Error(ErrorCode::kIllConditionedFit, "sample layout is singular");
  const Eigen::VectorXd c = svd.solve(rhs).cwiseQuotient(norms);

  for (int k = 0; k < 4; ++k) out.lx[k] = c(k);
  for (int k = 1; k < 4; ++k) out.ly[k] = c(3 + k);
  for (int k = 0; k < 3; ++k) out.lm[k] = c(7 + k);

  const auto gx = to_global(out.lx, ic.point.x, out.scale);
  const auto gy = to_global(out.ly, ic.point.y, out.scale);
  // Expand the mixed part with u = a x + b, v = a y + d.
  const double a = 1.0 / out.scale;
  const double b = -ic.point.x / out.scale;
  const double d = -ic.point.y / out.scale;
  const double m0 = out.lm[0], m1 = out.lm[1], m2 = out.lm[2];
  out.ax0 = gx[0] + gy[0] + m0 * b * d + m1 * b * b * d + m2 * b * d * d;
  out.ax1 = gx[1] + m0 * a * d + m1 * 2.0 * a * b * d + m2 * a * d * d;
  out.ax2 = gx[2] + m1 * a * a * d;
  out.ax3 = gx[3];
  out.by1 = gy[1] + m0 * a * b + m1 * a * b * b + m2 * 2.0 * a * b * d;
  out.by2 = gy[2] + m2 * a * a * b;
  out.by3 = gy[3];
  out.cxy = m0 * a * a + m1 * 2.0 * a * a * b + m2 * 2.0 * a * a * d;
  out.cx2y = m1 * a * a * a;
  out.cxy2 = m2 * a * a * a;

  // Worst misfit over the samples (nonzero when f is not one cubic here)
  // and three held-out points between them.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.residual = std::max(out.residual, std::abs(out.value_unchecked(samples[static_cast<std::size_t>(k)]) - rhs(k)));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const Point v = cell[i * cell.size() / 3];
    const Point p = ic.point + 0.58 * (v - ic.point);
    if (ring_contains(cell, p, 0.0)) out.residual = std::max(out.residual, std::abs(out.value_unchecked(p) - eval.f(p).value));
  }
  return out;
}

CubicPair fit_cell_cubic(const PolygonalDomain& domain, const Ring& cell, Metric metric) {
  return fit_cell_cubic(Evaluator(domain, metric), cell);
}

}  // namespace l1m
