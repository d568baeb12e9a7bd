#include "l1median/geometry.hpp"

#include <algorithm>

namespace l1m {

double signed_area(const Ring& ring) {
  double s = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    s += cross(ring[i], ring[(i + 1) % n]);
  }
  return 0.5 * s;
}

double project_parameter(Point p, Point a, Point b) {
  const Point d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return 0.0;
  return std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
}

double point_segment_distance(Point p, Point a, Point b) {
  const double t = project_parameter(p, a, b);
  return euclid(p, a + t * (b - a));
}

bool segments_touch(Point a, Point b, Point c, Point d, double eps) {
  if (point_segment_distance(a, c, d) <= eps || point_segment_distance(b, c, d) <= eps ||
      point_segment_distance(c, a, b) <= eps || point_segment_distance(d, a, b) <= eps) {
    return true;
  }
  return segments_cross_properly(a, b, c, d, 0.0);
}

bool segments_cross_properly(Point a, Point b, Point c, Point d, double eps) {
  const double d1 = orient(a, b, c);
  const double d2 = orient(a, b, d);
  const double d3 = orient(c, d, a);
  const double d4 = orient(c, d, b);
  const double s1 = eps * euclid(a, b);
  const double s2 = eps * euclid(c, d);
  return ((d1 > s1 && d2 < -s1) || (d1 < -s1 && d2 > s1)) &&
         ((d3 > s2 && d4 < -s2) || (d3 < -s2 && d4 > s2));
}

std::optional<Point> line_intersection(Point a, Point b, Point c, Point d) {
  const Point r = b - a;
  const Point s = d - c;
  const double den = cross(r, s);
  const double scale = std::sqrt(dot(r, r) * dot(s, s));
  if (std::abs(den) <= 1e-14 * scale || scale == 0.0) return std::nullopt;
  const double t = cross(c - a, s) / den;
  return a + t * r;
}

Moments ring_moments(const Ring& ring) {
  Moments m;
  const std::size_t n = ring.size();
  if (n < 3) return m;
  // Shift to the first vertex to limit cancellation.
  const Point o = ring[0];
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = ring[i] - o;
    const Point q = ring[(i + 1) % n] - o;
    const double w = cross(p, q);
    m.area += w;
    m.mx += (p.x + q.x) * w;
    m.my += (p.y + q.y) * w;
  }
  m.area *= 0.5;
  m.mx /= 6.0;
  m.my /= 6.0;
  m.mx += o.x * m.area;
  m.my += o.y * m.area;
  return m;
}

Ring clip_convex(const Ring& poly, const HalfPlane& h) {
  Ring out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = poly[i];
    const Point q = poly[(i + 1) % n];
    const double fp = h.eval(p);
    const double fq = h.eval(q);
    if (fp >= 0.0) out.push_back(p);
    if ((fp > 0.0 && fq < 0.0) || (fp < 0.0 && fq > 0.0)) {
      const double t = fp / (fp - fq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

Ring tidy_convex(const Ring& poly, double eps) {
  Ring out;
  for (const Point& p : poly) {
    if (out.empty() || !near(out.back(), p, eps)) out.push_back(p);
  }
  while (out.size() > 1 && near(out.front(), out.back(), eps)) out.pop_back();
  bool changed = true;
  while (changed && out.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Point a = out[(i + out.size() - 1) % out.size()];
      const Point b = out[i];
      const Point c = out[(i + 1) % out.size()];
      const double len = euclid(a, c);
      if (std::abs(orient(a, b, c)) <= eps * std::max(len, 1.0)) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (out.size() < 3 || std::abs(signed_area(out)) <= eps * eps) return {};
  return out;
}

bool point_in_ring(const Ring& ring, Point p) {
  bool in = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = ring[i];
    const Point b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) in = !in;
    }
  }
  return in;
}

}  // namespace l1m
