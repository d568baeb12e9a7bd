#include "l1median/region.hpp"

#include <cmath>

namespace l1m {

namespace {

// ∮ G(u) dv around the ring, where (u, v) = (x, y) and G is a polynomial of
// degree <= 2 on each side of u = a. Edges are split at u = a so Simpson's
// rule is exact on every piece.
template <typename G>
double contour_integral(const Ring& ring, double a, bool transposed, G&& g) {
  double sum = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point p = ring[i];
    Point q = ring[(i + 1) % n];
    if (transposed) {
      p = transpose(p);
      q = transpose(q);
    }
    const double dv = q.y - p.y;
    if (dv == 0.0) continue;
    auto piece = [&](double t0, double t1) {
      const double u0 = p.x + t0 * (q.x - p.x);
      const double u1 = p.x + t1 * (q.x - p.x);
      const double um = 0.5 * (u0 + u1);
      return (t1 - t0) / 6.0 * (g(u0) + 4.0 * g(um) + g(u1)) * dv;
    };
    if ((p.x - a) * (q.x - a) < 0.0) {
      const double t = (a - p.x) / (q.x - p.x);
      sum += piece(0.0, t) + piece(t, 1.0);
    } else {
      sum += piece(0.0, 1.0);
    }
  }
  return sum;
}

template <typename F>
double over_region(const Region& region, F&& f) {
  double s = 0.0;
  for (const Polygon& poly : region) {
    s += f(poly.outer);
    for (const Ring& h : poly.holes) s += f(h);
  }
  return s;
}

}  // namespace

double region_area(const Region& region) {
  return over_region(region, [](const Ring& r) { return signed_area(r); });
}

Moments region_moments(const Region& region) {
  Moments m;
  for (const Polygon& poly : region) {
    m += ring_moments(poly.outer);
    for (const Ring& h : poly.holes) m += ring_moments(h);
  }
  return m;
}

double integral_abs_dx(const Ring& ring, double a) {
  return contour_integral(ring, a, false,
                          [a](double x) { return 0.5 * (x - a) * std::abs(x - a); });
}

double integral_abs_dy(const Ring& ring, double b) {
  // ∫∫ h(y) dA = -∮ H(y) dx.
  return -contour_integral(ring, b, true,
                           [b](double y) { return 0.5 * (y - b) * std::abs(y - b); });
}

double integral_l1(const Region& region, Point root) {
  return over_region(region, [root](const Ring& r) {
    return integral_abs_dx(r, root.x) + integral_abs_dy(r, root.y);
  });
}

double area_left_of(const Region& region, double a) {
  // ∫∫ [x < a] dA = ∮ min(x, a) dy - a ∮ dy, and ∮ dy vanishes.
  return over_region(region, [a](const Ring& r) {
    return contour_integral(r, a, false, [a](double x) { return std::min(x, a); });
  });
}

double area_below_y(const Region& region, double b) {
  return over_region(region, [b](const Ring& r) {
    return -contour_integral(r, b, true, [b](double y) { return std::min(y, b); });
  });
}

}  // namespace l1m
