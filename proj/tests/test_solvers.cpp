#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "l1median/oracle.hpp"
#include "l1median/overlay.hpp"
#include "l1median/solver_holes.hpp"
#include "l1median/solver_simple.hpp"
#include "l1median/solver_straight.hpp"
#include "l1median/svg.hpp"
#include "l1median/trapezoid.hpp"
#include "test_support.hpp"

using namespace l1m;
using namespace l1m::testing;

namespace {

// Square with a centrally symmetric parallelogram hole: f is invariant under
// the half turn about (2, 2), so optima come in pairs.
PolygonalDomain parallelogram_hole() {
  return validate_domain({{{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{1.1, 1.3}, {2.6, 1.2}, {2.9, 2.7}, {1.4, 2.8}}});
}

// Comb: two teeth pointing up from a thin base, so the straight-line origin
// falls in the gap between them.
PolygonalDomain comb() {
  return validate_domain({{{0, 0}, {3.03, 0}, {3.03, 3.01}, {2.02, 3.01}, {2.02, 0.52}, {1.01, 0.52}, {1.01, 3.03},
                           {0, 3.03}}});
}

std::vector<PolygonalDomain> infeasible_origin_domains(int count) {
  std::vector<PolygonalDomain> out{square_with_hole(), parallelogram_hole()};
  std::mt19937_64 rng(77);
  while (static_cast<int>(out.size()) < count) {
    auto d = random_domain(rng, 8, 2);
    if (!l1_origin(d).feasible) out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

TEST_CASE("L1 origin") {
  auto o = l1_origin(unit_square());
  CHECK(near(o.point, {0.5, 0.5}, 1e-12));
  CHECK(o.feasible);
  o = l1_origin(lshape());
  CHECK(near(o.point, {0.75, 0.75}, 1e-12));
  CHECK(o.feasible);
  o = l1_origin(square_with_hole());
  CHECK(near(o.point, {2, 2}, 1e-12));
  CHECK_FALSE(o.feasible);
}

TEST_CASE("straight solver examples") {
  auto r = solve_straight(unit_square());
  CHECK(near(r.optimum.point, {0.5, 0.5}, 1e-12));
  CHECK(r.optimum.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.metric == "l1-straight");

  const auto holed = square_with_hole();
  r = solve_straight(holed);
  CHECK(r.ties.size() >= 4);
  for (const Candidate& t : r.ties) CHECK(locate(holed, t.point) == Location::kBoundary);
  const auto o = grid_search_optimum(holed, Metric::kStraight, make_grid(holed, 800));
  CHECK(std::abs(r.optimum.value - o.value) <= 2e-3);
}

TEST_CASE("parallelogram hole gives two symmetric optima") {
  const auto d = parallelogram_hole();
  const auto r = solve_straight(d);
  REQUIRE(r.ties.size() == 2);
  CHECK(near(r.ties[0].point + r.ties[1].point, {4, 4}, 1e-7));
  const auto o = grid_search_optimum(d, Metric::kStraight, make_grid(d, 400));
  CHECK(o.lower <= r.optimum.value);
  CHECK(r.optimum.value <= o.upper);
}

TEST_CASE("domination pruning") {
  const auto holed = square_with_hole();
  for (const BoundaryPiece& p : dominated_boundary(holed, l1_origin(holed))) {
    CHECK(holed.edges()[static_cast<std::size_t>(p.edge)].ring == 1);
  }
  for (const PolygonalDomain& d : infeasible_origin_domains(8)) {
    const auto on = solve_straight(d, {.prune = true});
    const auto off = solve_straight(d, {.prune = false});
    CHECK(on.optimum.value == doctest::Approx(off.optimum.value).epsilon(1e-9));
    for (const Candidate& c : off.candidates) CHECK(locate(d, c.point) != Location::kExterior);
  }
}

TEST_CASE("straight objective is convex along axis lines") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 6; ++k) {
    const auto d = random_domain(rng, 8, k % 3);
    const Evaluator ev(d, Metric::kStraight);
    const Point z = random_point_in(rng, d);
    for (Point dir : {Point{1, 0}, Point{0, 1}}) {
      const double h = 0.01;
      std::vector<double> v;
      for (int i = -30; i <= 30; ++i) {
        const Point p = z + (i * h) * dir;
        if (locate(d, p) == Location::kExterior) {
          v.clear();
          continue;
        }
        v.push_back(ev.f(p).value);
        if (v.size() >= 3) CHECK(v[v.size() - 1] - 2 * v[v.size() - 2] + v[v.size() - 3] >= -1e-9);
      }
    }
  }
}

TEST_CASE("tree median") {
  CHECK(tree_median(trapezoidize(unit_square(), Axis::kVertical)) == 0);
  const auto lt = trapezoidize(lshape(), Axis::kVertical);
  const auto& t = lt.trapezoids[tree_median(lt)];
  CHECK(t.lo == doctest::Approx(0.0));
  CHECK(t.hi == doctest::Approx(1.0));

  // Staircase of 7 unit-area slabs: the middle one is the median.
  Ring stair{{0, 0}};
  for (int i = 1; i <= 7; ++i) {
    stair.push_back({static_cast<double>(i), 1.0 / i * 0 + (i == 7 ? 0.0 : 0.0)});
  }
  Ring steps;
  const double w = 1.0;
  steps.push_back({0, 0});
  steps.push_back({7 * w, 0});
  for (int i = 7; i >= 1; --i) {
    steps.push_back({i * w, 1.0 + 0.01 * i});
    steps.push_back({(i - 1) * w, 1.0 + 0.01 * i});
  }
  steps.pop_back();
  steps.push_back({0, 1.01});
  // Heights differ slightly so every wall is a vertex line; areas are close
  // enough that the brute-force median condition picks the middle slab.
  const auto stairs = validate_domain({steps});
  const auto ts = trapezoidize(stairs, Axis::kVertical);
  REQUIRE(ts.trapezoids.size() == 7);
  const std::size_t m = tree_median(ts);
  CHECK(ts.trapezoids[m].lo == doctest::Approx(3.0));

  CHECK_THROWS_AS(tree_median(trapezoidize(square_with_hole(), Axis::kVertical)), Error);
}

TEST_CASE("tree median satisfies the half-area condition") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 20; ++k) {
    const auto d = random_simple(rng, 6 + k);
    const auto trap = trapezoidize(d, Axis::kVertical);
    const std::size_t m = tree_median(trap);
    // Components of the tree without m, by flood fill.
    const auto nb = trap.neighbours();
    std::vector<int> comp(trap.trapezoids.size(), -1);
    comp[m] = 0;
    int next = 1;
    for (std::size_t s = 0; s < comp.size(); ++s) {
      if (comp[s] != -1) continue;
      std::vector<std::size_t> stack{s};
      comp[s] = next;
      double area = 0.0;
      while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        area += trap.trapezoids[u].area;
        for (std::size_t v : nb[u]) {
          if (comp[v] == -1) {
            comp[v] = next;
            stack.push_back(v);
          }
        }
      }
      CHECK(area <= 0.5 * d.area() * (1 + 1e-12));
      ++next;
    }
  }
}

TEST_CASE("median chords halve the area") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 20; ++k) {
    const auto d = random_simple(rng, 5 + k);
    for (Axis axis : {Axis::kVertical, Axis::kHorizontal}) {
      const MedianChord c = median_chord(d, axis);
      const double below = area_below(trapezoidize(d, axis), c.coordinate);
      CHECK(below == doctest::Approx(0.5 * d.area()).epsilon(1e-9));
    }
  }
}

TEST_CASE("simple solver examples") {
  auto r = solve_simple(unit_square());
  CHECK(near(r.optimum.point, {0.5, 0.5}, 1e-12));
  CHECK(r.optimum.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.metric == "l1-geodesic-simple");

  const auto L = lshape();
  r = solve_simple(L);
  CHECK(near(r.optimum.point, {0.75, 0.75}, 1e-9));
  const auto o = integrate_average(L, r.optimum.point, Metric::kGeodesic, make_grid(L, 400));
  CHECK(std::abs(o.estimate - r.optimum.value) <= 2e-3);

  const auto c = comb();
  CHECK_FALSE(l1_origin(c).feasible);
  r = solve_simple(c);
  // The optimum sits on the floor of the gap between the teeth.
  CHECK(locate(c, r.optimum.point) != Location::kExterior);
  const auto oc = grid_search_optimum(c, Metric::kGeodesic, make_grid(c, 256));
  CHECK(oc.lower <= r.optimum.value);
  CHECK(r.optimum.value <= oc.upper);

  CHECK_THROWS_AS(solve_simple(square_with_hole()), Error);
}

TEST_CASE("simple solver is always feasible and optimal") {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 100; ++k) {
    const auto d = random_simple(rng, 4 + k % 37);
    const auto r = solve_simple(d);
    CHECK(locate(d, r.optimum.point) != Location::kExterior);
  }
  for (int k = 0; k < 4; ++k) {
    const auto d = random_simple(rng, 6 + k);
    const auto r = solve_simple(d);
    const auto o = grid_search_optimum(d, Metric::kGeodesic, make_grid(d, 96));
    CHECK(o.lower <= r.optimum.value);
    CHECK(r.optimum.value <= o.upper);
  }
}

TEST_CASE("convex domains: all solvers agree") {
  std::mt19937_64 rng(15);
  for (int k = 0; k < 5; ++k) {
    Ring r = random_star(rng, 5 + k, {0, 0}, 3.0, 3.0);
    const auto d = validate_domain({r});
    const auto s = solve_straight(d);
    const auto g = solve_simple(d);
    const auto h = solve_holes(d);
    CHECK(g.optimum.value == doctest::Approx(s.optimum.value).epsilon(1e-9));
    CHECK(h.optimum.value == doctest::Approx(s.optimum.value).epsilon(1e-9));
    CHECK(near(g.optimum.point, s.optimum.point, 1e-9));
  }
}

TEST_CASE("overlay structure") {
  auto ov = build_overlay(unit_square());
  CHECK(ov.faces.size() == 1);

  for (const PolygonalDomain& d : {square_with_hole(), parallelogram_hole(), lshape()}) {
    ov = build_overlay(d);
    // Independent Euler check: components of the edge graph by union-find.
    std::vector<std::size_t> parent(ov.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    for (const auto& [a, b] : ov.edges) parent[find(a)] = find(b);
    long components = 0;
    for (std::size_t i = 0; i < parent.size(); ++i) components += find(i) == i;
    const long v = static_cast<long>(ov.vertices.size());
    const long e = static_cast<long>(ov.edges.size());
    const long f = static_cast<long>(ov.faces.size() + ov.hole_faces) + 1;
    CHECK(v - e + f == 1 + components);
    CHECK(ov.hole_faces == d.holes().size());
    double area = 0.0;
    for (const Ring& face : ov.faces) area += signed_area(face);
    CHECK(area == doctest::Approx(d.area()).epsilon(1e-9));
  }
}

TEST_CASE("no watershed of SPM(face centre) touches a vertex") {
  const auto d = parallelogram_hole();
  const VisibilityGraph g(d);
  const auto ov = build_overlay(g);
  const double eps = 1e-6 * d.diameter();
  for (const Ring& face : ov.faces) {
    const InteriorCentre c = interior_centre(face);
    if (c.radius < 1e-7 * d.diameter()) continue;
    const auto spm = classify_watersheds(build_spm(g, c.point), g);
    for (const Bisector& b : spm.bisectors) {
      if (b.kind != BisectorKind::kWatershed) continue;
      for (std::size_t i = 0; i + 1 < b.chain.size(); ++i) {
        for (const Point& v : d.vertices()) CHECK(point_segment_distance(v, b.chain[i], b.chain[i + 1]) >= eps);
      }
    }
  }
}

TEST_CASE("holes solver examples") {
  auto r = solve_holes(unit_square());
  CHECK(near(r.optimum.point, {0.5, 0.5}, 1e-9));
  CHECK(r.optimum.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.metric == "l1-geodesic");

  const auto holed = square_with_hole();
  r = solve_holes(holed);
  CHECK(r.ties.size() >= 4);
  // f is constant along the hole boundary, so the corners are among the ties.
  for (Point corner : {Point{1, 1}, Point{3, 1}, Point{1, 3}, Point{3, 3}}) {
    bool found = false;
    for (const Candidate& t : r.ties) found = found || near(t.point, corner, 1e-9);
    CHECK(found);
  }
  CHECK(r.optimum.value == doctest::Approx(8.0 / 3.0).epsilon(1e-9));
  const auto o = grid_search_optimum(holed, Metric::kGeodesic, make_grid(holed, 160));
  CHECK(o.lower <= r.optimum.value);
  CHECK(r.optimum.value <= o.upper);
  CHECK(r.optimum.value >= solve_straight(holed).optimum.value);
}

TEST_CASE("holes solver on random domains") {
  std::mt19937_64 rng(16);
  for (int k = 0; k < 3; ++k) {
    const auto d = random_domain(rng, 7, 1 + k % 2);
    const Evaluator ev(d, Metric::kGeodesic);
    const auto ov = build_overlay(ev.graph());
    const auto fits = fit_faces(ev, ov);
    const auto r = solve_holes(ev, ov, fits);
    CHECK(r.optimum.value >= solve_straight(d).optimum.value - 1e-12);
    if (r.optimum.provenance == Provenance::kCellInterior) {
      const Gradient g = ev.gradient(r.optimum.point);
      CHECK(std::hypot(g.fx, g.fy) <= 1e-6);
    }
    const auto o = grid_search_optimum(d, Metric::kGeodesic, make_grid(d, 96));
    CHECK(o.lower <= r.optimum.value);
    CHECK(r.optimum.value <= o.upper);

    if (k > 0) continue;
    // One extra vertical line per face must not improve the optimum.
    HolesOptions refine;
    for (const Ring& face : ov.faces) {
      const InteriorCentre c = interior_centre(face);
      for (const Segment& s : domain_chords(d, Axis::kVertical, c.point.x + 0.1 * c.radius)) refine.extra.push_back(s);
    }
    const auto rr = solve_holes(d, refine);
    CHECK(rr.optimum.value >= r.optimum.value - 1e-9);
  }
}

TEST_CASE("holes solver agrees with the simple solver without holes") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 4; ++k) {
    const auto d = random_simple(rng, 6 + k);
    CHECK(solve_holes(d).optimum.value == doctest::Approx(solve_simple(d).optimum.value).epsilon(1e-9));
  }
}

TEST_CASE("threads do not change the result") {
  std::mt19937_64 rng(18);
  const auto d = random_domain(rng, 7, 1);
  const auto a = solve_holes(d, {.threads = 1});
  const auto b = solve_holes(d, {.threads = 3});
  CHECK(a.optimum.value == b.optimum.value);
  CHECK(a.optimum.point == b.optimum.point);
  CHECK(a.candidates.size() == b.candidates.size());
}

TEST_CASE("cubic critical points") {
  CubicPair c;
  c.centre = {0, 0};
  c.scale = 1.0;
  c.f_scale = 1.0;
  // (u² - 1)(v) style gradient: f = u³/3 - u + v³/3 - 4v.
  c.lx[3] = 1.0 / 3.0;
  c.lx[1] = -1.0;
  c.ly[3] = 1.0 / 3.0;
  c.ly[1] = -4.0;
  CHECK(cubic_critical_points(c).size() == 4);
  // Mixed: f = u²v + v³/3 - v has gradient (2uv, u² + v² - 1): critical
  // points (0, ±1) and (±1, 0).
  CubicPair m;
  m.centre = {0, 0};
  m.scale = 1.0;
  m.f_scale = 1.0;
  m.lm[1] = 1.0;
  m.ly[3] = 1.0 / 3.0;
  m.ly[1] = -1.0;
  auto pts = cubic_critical_points(m);
  CHECK(pts.size() >= 4);
  for (Point p : pts) {
    const Gradient g = m.gradient(p);
    CHECK(std::abs(g.fx) + std::abs(g.fy) <= 1e-9);
  }
  for (Point want : {Point{0, 1}, Point{0, -1}, Point{1, 0}, Point{-1, 0}}) {
    bool found = false;
    for (Point p : pts) found = found || near(p, want, 1e-9);
    CHECK(found);
  }
  // Along u from (-2, 0) to (2, 0), f = u³/3 - u has critical points at ±1.
  auto ts = cubic_edge_critical(c, {-2, 0}, {2, 0});
  REQUIRE(ts.size() == 2);
  CHECK(ts[0] == doctest::Approx(0.25));
  CHECK(ts[1] == doctest::Approx(0.75));
}

TEST_CASE("overlay and straight SVG layers") {
  const auto d = square_with_hole();
  const auto ov = build_overlay(d);
  const std::string a = overlay_svg(d, ov, solve_holes(d));
  for (const char* layer : {"overlay", "candidates", "optimum"}) {
    CHECK(a.find(std::string("<g id=\"") + layer + "\">") != std::string::npos);
  }
  const std::string b = straight_svg(d, l1_origin(d), solve_straight(d));
  for (const char* layer : {"grid", "origin", "candidates"}) {
    CHECK(b.find(std::string("<g id=\"") + layer + "\">") != std::string::npos);
  }
}
