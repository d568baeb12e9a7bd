#include "l1median/trapezoid.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "l1median/poly.hpp"

namespace l1m {

namespace {

struct SweepEdge {
  Point a;  // a.x < b.x in sweep coordinates
  Point b;
  int id = 0;

  double at(double s) const {
    if (s <= a.x) return a.y;
    if (s >= b.x) return b.y;
    return a.y + (s - a.x) * (b.y - a.y) / (b.x - a.x);
  }
};

Point to_sweep(Point p, Axis axis) { return axis == Axis::kVertical ? p : transpose(p); }
Point from_sweep(Point p, Axis axis) { return axis == Axis::kVertical ? p : transpose(p); }

}  // namespace

double Trapezoid::bottom_at(double s) const {
  if (hi <= lo) return bot_lo;
  return bot_lo + (s - lo) * (bot_hi - bot_lo) / (hi - lo);
}

double Trapezoid::top_at(double s) const {
  if (hi <= lo) return top_lo;
  return top_lo + (s - lo) * (top_hi - top_lo) / (hi - lo);
}

double Trapezoid::area_before(double s) const {
  if (s <= lo) return 0.0;
  if (s >= hi) return area;
  const double w0 = top_lo - bot_lo;
  return 0.5 * (s - lo) * (w0 + width_at(s));
}

std::vector<std::vector<std::size_t>> Trapezoidization::neighbours() const {
  std::vector<std::vector<std::size_t>> out(trapezoids.size());
  for (const auto& [i, j] : adjacency) {
    out[i].push_back(j);
    out[j].push_back(i);
  }
  return out;
}

double Trapezoidization::total_area() const {
  double s = 0.0;
  for (const Trapezoid& t : trapezoids) s += t.area;
  return s;
}

Trapezoidization trapezoidize(const PolygonalDomain& domain, Axis axis) {
  const double eps = kEpsGeom * std::max(1.0, domain.diameter());
  std::vector<SweepEdge> edges;
  std::vector<double> coords;
  for (const Edge& e : domain.edges()) {
    Point a = to_sweep(e.a, axis);
    Point b = to_sweep(e.b, axis);
    coords.push_back(a.x);
    if (std::abs(a.x - b.x) <= eps) continue;  // wall-parallel edges bound no slab
    if (a.x > b.x) std::swap(a, b);
    edges.push_back({a, b, e.id});
  }
  std::sort(coords.begin(), coords.end());
  std::vector<double> xs;
  for (double c : coords) {
    if (xs.empty() || c - xs.back() > eps) xs.push_back(c);
  }

  Trapezoidization out;
  out.axis = axis;
  // Trapezoids that reach the previous slab boundary, keyed by (bottom, top).
  std::map<std::pair<int, int>, std::size_t> open;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x0 = xs[i];
    const double x1 = xs[i + 1];
    const double xm = 0.5 * (x0 + x1);
    std::vector<const SweepEdge*> span;
    for (const SweepEdge& e : edges) {
      if (e.a.x <= x0 + eps && e.b.x >= x1 - eps) span.push_back(&e);
    }
    std::sort(span.begin(), span.end(),
              [xm](const SweepEdge* l, const SweepEdge* r) { return l->at(xm) < r->at(xm); });
    std::map<std::pair<int, int>, std::size_t> next_open;
    std::vector<std::size_t> started;
    for (std::size_t k = 0; k + 1 < span.size(); k += 2) {
      const SweepEdge* bot = span[k];
      const SweepEdge* top = span[k + 1];
      const std::pair<int, int> key{bot->id, top->id};
      auto it = open.find(key);
      std::size_t idx;
      if (it != open.end()) {
        idx = it->second;
        Trapezoid& t = out.trapezoids[idx];
        t.hi = x1;
        t.bot_hi = bot->at(x1);
        t.top_hi = top->at(x1);
      } else {
        Trapezoid t;
        t.lo = x0;
        t.hi = x1;
        t.bot_lo = bot->at(x0);
        t.bot_hi = bot->at(x1);
        t.top_lo = top->at(x0);
        t.top_hi = top->at(x1);
        t.bottom_edge = bot->id;
        t.top_edge = top->id;
        idx = out.trapezoids.size();
        out.trapezoids.push_back(t);
        started.push_back(idx);
      }
      next_open[key] = idx;
    }
    // Walls at x0: trapezoids that ended there against those that started.
    for (const auto& [key, li] : open) {
      if (next_open.count(key) && next_open[key] == li) continue;
      const Trapezoid& l = out.trapezoids[li];
      for (std::size_t ri : started) {
        const Trapezoid& r = out.trapezoids[ri];
        const double overlap = std::min(l.top_hi, r.top_lo) - std::max(l.bot_hi, r.bot_lo);
        if (overlap > eps) out.adjacency.emplace_back(li, ri);
      }
    }
    open = std::move(next_open);
  }

  for (Trapezoid& t : out.trapezoids) {
    t.area = 0.5 * (t.hi - t.lo) * ((t.top_lo - t.bot_lo) + (t.top_hi - t.bot_hi));
    Ring poly{{t.lo, t.bot_lo}, {t.hi, t.bot_hi}, {t.hi, t.top_hi}, {t.lo, t.top_lo}};
    Ring cleaned;
    for (Point p : poly) {
      if (cleaned.empty() || !near(cleaned.back(), p, eps)) cleaned.push_back(p);
    }
    if (cleaned.size() > 1 && near(cleaned.front(), cleaned.back(), eps)) cleaned.pop_back();
    for (Point& p : cleaned) p = from_sweep(p, axis);
    if (signed_area(cleaned) < 0.0) std::reverse(cleaned.begin(), cleaned.end());
    t.polygon = std::move(cleaned);
  }
  return out;
}

double area_below(const Trapezoidization& trap, double s) {
  double a = 0.0;
  for (const Trapezoid& t : trap.trapezoids) a += t.area_before(s);
  return a;
}

double area_quantile(const Trapezoidization& trap, double target) {
  std::vector<double> xs;
  for (const Trapezoid& t : trap.trapezoids) {
    xs.push_back(t.lo);
    xs.push_back(t.hi);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.empty()) return 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x0 = xs[i];
    const double x1 = xs[i + 1];
    const double a0 = area_below(trap, x0);
    const double a1 = area_below(trap, x1);
    if (target > a1 && i + 2 < xs.size()) continue;
    if (target <= a0) return x0;
    // Within the slab, area_below(x0 + u) = a0 + w0*u + 0.5*dw*u^2.
    double w0 = 0.0;
    double dw = 0.0;
    for (const Trapezoid& t : trap.trapezoids) {
      if (t.lo <= x0 && t.hi >= x1) {
        w0 += t.width_at(x0);
        dw += (t.width_at(x1) - t.width_at(x0)) / (x1 - x0);
      }
    }
    const auto roots = solve_quadratic(0.5 * dw, w0, a0 - target);
    const double width = x1 - x0;
    double best = x0 + (target - a0) / std::max(a1 - a0, 1e-300) * width;
    for (double u : roots) {
      if (u >= -1e-12 * width && u <= width * (1.0 + 1e-12)) {
        best = x0 + std::clamp(u, 0.0, width);
        break;
      }
    }
    return best;
  }
  return xs.back();
}

}  // namespace l1m
