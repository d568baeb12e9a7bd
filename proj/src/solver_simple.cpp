#include "l1median/solver_simple.hpp"

#include <algorithm>
#include <cmath>

#include "l1median/objective.hpp"
#include "l1median/poly.hpp"

namespace l1m {

namespace {

// Component areas hanging off each neighbour of `centre`, by a traversal of
// the tree rooted at `centre`.
std::vector<double> branch_areas(const Trapezoidization& trap,
                                 const std::vector<std::vector<std::size_t>>& nb, std::size_t centre) {
  const std::size_t m = trap.trapezoids.size();
  std::vector<std::size_t> parent(m, m);
  std::vector<std::size_t> order{centre};
  parent[centre] = centre;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j : nb[order[i]]) {
      if (parent[j] != m) continue;
      parent[j] = order[i];
      order.push_back(j);
    }
  }
  std::vector<double> sub(m, 0.0);
  for (std::size_t i = order.size(); i-- > 0;) {
    const std::size_t v = order[i];
    sub[v] += trap.trapezoids[v].area;
    if (v != centre) sub[parent[v]] += sub[v];
  }
  return sub;
}

}  // namespace

std::size_t tree_median(const Trapezoidization& trap) {
  const std::size_t m = trap.trapezoids.size();
  if (m == 0) throw Error(ErrorCode::kBadInput, "empty trapezoidization");
  if (trap.adjacency.size() != m - 1) {
    throw Error(ErrorCode::kNotATree, "trapezoid adjacency graph is not a tree");
  }
  const auto nb = trap.neighbours();
  const std::vector<double> sub = branch_areas(trap, nb, 0);
  // A tree with m - 1 edges is connected iff the traversal reached everything.
  for (std::size_t v = 0; v < m; ++v) {
    if (sub[v] == 0.0 && trap.trapezoids[v].area > 0.0) {
      throw Error(ErrorCode::kNotATree, "trapezoid adjacency graph is disconnected");
    }
  }
  const double half = 0.5 * trap.total_area();
  std::size_t cur = 0;
  std::size_t from = m;
  for (;;) {
    std::size_t next = m;
    for (std::size_t j : nb[cur]) {
      if (j != from && sub[j] > half) next = j;
    }
    if (next == m) return cur;
    from = cur;
    cur = next;
  }
}

MedianChord median_chord(const PolygonalDomain& domain, Axis axis) {
  if (domain.has_holes()) throw Error(ErrorCode::kHasHoles, "domain has holes");
  const Trapezoidization trap = trapezoidize(domain, axis);
  const std::size_t med = tree_median(trap);
  const Trapezoid& t = trap.trapezoids[med];
  const auto nb = trap.neighbours();
  const std::vector<double> sub = branch_areas(trap, nb, med);
  const double eps = kEpsGeom * std::max(1.0, domain.diameter());
  double low = 0.0;
  double high = 0.0;
  for (std::size_t j : nb[med]) {
    if (std::abs(trap.trapezoids[j].hi - t.lo) <= eps) {
      low += sub[j];
    } else {
      high += sub[j];
    }
  }

  MedianChord out;
  out.axis = axis;
  out.trapezoid = med;
  // low + q(s) = high + (area - q(s)).
  const double target = 0.5 * (high - low + t.area);
  if (target <= 0.0) {
    out.coordinate = t.lo;
    out.on_wall = true;
    out.area_low = low;
    out.area_high = high + t.area;
    return out;
  }
  if (target >= t.area) {
    out.coordinate = t.hi;
    out.on_wall = true;
    out.area_low = low + t.area;
    out.area_high = high;
    return out;
  }
  // q(lo + u) = w0 u + k u² / 2 with w the chord length.
  const double len = t.hi - t.lo;
  const double w0 = t.width_at(t.lo);
  const double k = (t.width_at(t.hi) - w0) / len;
  double u = 0.5 * len;
  for (double r : solve_quadratic(0.5 * k, w0, -target)) {
    if (r >= -eps && r <= len + eps) u = std::clamp(r, 0.0, len);
  }
  out.coordinate = t.lo + u;
  out.area_low = low + target;
  out.area_high = high + t.area - target;
  return out;
}

SolveResult solve_simple(const PolygonalDomain& domain) {
  if (domain.has_holes()) throw Error(ErrorCode::kHasHoles, "domain has holes");
  const Point z{median_chord(domain, Axis::kVertical).coordinate,
                median_chord(domain, Axis::kHorizontal).coordinate};
  Candidate c{z, evaluate_f(domain, z, Metric::kGeodesic).value, Provenance::kL1Origin};
  return finish_result("l1-geodesic-simple", {c}, kEpsGeom * std::max(1.0, domain.diameter()), 1);
}

}  // namespace l1m
