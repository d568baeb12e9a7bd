#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>
#include <set>

#include "l1median/domain.hpp"
#include "l1median/trapezoid.hpp"
#include "test_support.hpp"

using namespace l1m;
using namespace l1m::testing;

namespace {

// Independent crossing-number classification used as an oracle for locate.
bool crossing_inside(const std::vector<Ring>& rings, Point p) {
  int crossings = 0;
  for (const Ring& r : rings) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      Point a = r[i];
      Point b = r[(i + 1) % r.size()];
      if (a.y > b.y) std::swap(a, b);
      if (p.y < a.y || p.y >= b.y) continue;
      const double t = (p.y - a.y) / (b.y - a.y);
      if (a.x + t * (b.x - a.x) > p.x) ++crossings;
    }
  }
  return crossings % 2 == 1;
}

ErrorCode code_of(const std::vector<Ring>& rings) {
  try {
    validate_domain(rings);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected validation failure");
  return ErrorCode::kBadInput;
}

}  // namespace

TEST_CASE("validate_domain accepts and normalizes") {
  const auto sq = unit_square();
  CHECK(sq.size() == 4);
  CHECK(signed_area(sq.outer()) > 0);

  const auto holed = square_with_hole();
  CHECK(holed.size() == 8);
  CHECK(signed_area(holed.holes()[0]) < 0);

  // Clockwise outer input is reversed.
  const auto cw = validate_domain({{{0, 0}, {0, 1}, {1, 1}, {1, 0}}});
  CHECK(signed_area(cw.outer()) > 0);
}

TEST_CASE("validate_domain rejects bad rings") {
  CHECK(code_of({{{0, 0}, {2, 2}, {2, 0}, {0, 2}}}) == ErrorCode::kSelfIntersection);
  CHECK(code_of({{{0, 0}, {1, 0}}}) == ErrorCode::kDegenerateRing);
  CHECK(code_of({{{0, 0}, {1, 0}, {2, 0}, {1, 1}}}) == ErrorCode::kDegenerateRing);
  CHECK(code_of({{{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{5, 5}, {6, 5}, {6, 6}}}) ==
        ErrorCode::kHoleOutsideOuter);
  CHECK(code_of({{{0, 0}, {4, 0}, {4, 4}, {0, 4}},
                 {{1, 1}, {2, 1}, {2, 2}, {1, 2}},
                 {{1.5, 1.5}, {3, 1.5}, {3, 3}}}) == ErrorCode::kHolesOverlap);
  try {
    validate_domain({{{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{1, 1}, {3, 3}, {3, 1}, {1, 3}}});
    FAIL("bow-tie hole accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSelfIntersection);
    CHECK(e.ring() == 1);
  }
}

TEST_CASE("validation is idempotent") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto d = random_domain(rng, 8, i % 3);
    const auto again = validate_domain(d.rings());
    CHECK(again.rings() == d.rings());
  }
}

TEST_CASE("area") {
  CHECK(area(unit_square()) == doctest::Approx(1.0));
  CHECK(area(square_with_hole()) == doctest::Approx(12.0));
  CHECK(area(triangle()) == doctest::Approx(3.0));
}

TEST_CASE("locate") {
  const auto sq = unit_square();
  CHECK(locate(sq, {0.5, 0.5}) == Location::kInterior);
  CHECK(locate(sq, {1.0, 0.5}) == Location::kBoundary);
  CHECK(locate(sq, {1.5, 0.5}) == Location::kExterior);
  CHECK(locate(square_with_hole(), {2, 2}) == Location::kExterior);
  CHECK(locate(square_with_hole(), {0.5, 2}) == Location::kInterior);
}

TEST_CASE("locate agrees with crossing-number oracle") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 6; ++k) {
    const auto d = random_domain(rng, 7 + k, k % 3);
    std::uniform_real_distribution<double> ux(d.min_x() - 0.5, d.max_x() + 0.5);
    std::uniform_real_distribution<double> uy(d.min_y() - 0.5, d.max_y() + 0.5);
    for (int i = 0; i < 1000; ++i) {
      const Point p{ux(rng), uy(rng)};
      const Location loc = locate(d, p);
      if (loc == Location::kBoundary) continue;
      CHECK((loc == Location::kInterior) == crossing_inside(d.rings(), p));
    }
  }
}

TEST_CASE("segment visibility") {
  const auto h = square_with_hole();
  CHECK(segment_in_domain(h, {0, 0}, {4, 0}));
  CHECK(segment_in_domain(h, {0.5, 0.5}, {3.5, 0.5}));
  CHECK_FALSE(segment_in_domain(h, {0, 2}, {4, 2}));
  // Along the hole boundary and grazing its corner.
  CHECK(segment_in_domain(h, {1, 1}, {3, 1}));
  CHECK(segment_in_domain(h, {0, 0}, {1, 1}));
  CHECK(segment_in_domain(h, {0.5, 0.5}, {1.5, 0.5}));
  CHECK_FALSE(segment_in_domain(h, {0.5, 0.5}, {3.5, 3.5}));
  const auto l = lshape();
  CHECK(segment_in_domain(l, {0, 2}, {2, 0}));  // passes through the reflex corner
  CHECK_FALSE(segment_in_domain(l, {0.5, 1.9}, {1.9, 0.5}));
}

TEST_CASE("critical vertices") {
  CHECK(critical_vertices(unit_square()).empty());

  const auto tri_hole = validate_domain({{{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{1, 1}, {3, 1.5}, {2, 3}}});
  const auto cv = critical_vertices(tri_hole);
  CHECK(cv.size() == 3);

  // Tie rule at the rectilinear reflex corner: both axes count as extremal.
  const auto l = critical_vertices(lshape());
  REQUIRE(l.size() == 1);
  CHECK(l[0].point == Point{1, 1});
  CHECK(l[0].x_min);
  CHECK(l[0].y_min);
  CHECK_FALSE(l[0].x_max);
  CHECK_FALSE(l[0].y_max);
}

TEST_CASE("critical vertex tie rule matches a boundary walk") {
  // Brute force: sample boundary points within a small radius of each
  // reflex vertex and check whether any is strictly more extreme.
  const auto l = lshape();
  const auto& v = l.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!is_reflex(l, i)) continue;
    bool lower_x = false;
    for (std::size_t nb : {l.prev_vertex(i), l.next_vertex(i)}) {
      for (int k = 1; k <= 10; ++k) {
        const Point p = v[i] + (1e-4 * k) * (v[nb] - v[i]);
        if (p.x < v[i].x - 1e-12) lower_x = true;
      }
    }
    CHECK_FALSE(lower_x);  // (1,1) is locally x-minimal
  }
}

TEST_CASE("trapezoidize examples") {
  const auto l = trapezoidize(lshape(), Axis::kVertical);
  REQUIRE(l.trapezoids.size() == 2);
  CHECK(l.adjacency.size() == 1);
  std::multiset<double> areas{l.trapezoids[0].area, l.trapezoids[1].area};
  CHECK(*areas.begin() == doctest::Approx(1.0));
  CHECK(*areas.rbegin() == doctest::Approx(2.0));

  CHECK(trapezoidize(unit_square(), Axis::kVertical).trapezoids.size() == 1);

  const auto h = trapezoidize(square_with_hole(), Axis::kVertical);
  CHECK(h.trapezoids.size() == 4);
  CHECK(h.total_area() == doctest::Approx(12.0));
  // Four trapezoids, four walls: the adjacency graph has a cycle.
  CHECK(h.adjacency.size() == 4);
}

TEST_CASE("trapezoid invariants on random domains") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 30; ++k) {
    const int holes = k % 3;
    const auto d = random_domain(rng, 6 + k % 9, holes);
    for (Axis axis : {Axis::kVertical, Axis::kHorizontal}) {
      const auto t = trapezoidize(d, axis);
      CHECK(std::abs(t.total_area() - d.area()) <= 1e-9 * d.area());
      for (const auto& tr : t.trapezoids) {
        CHECK(std::abs(signed_area(tr.polygon) - tr.area) <= 1e-9 * d.area());
      }
      if (holes == 0) {
        CHECK(t.adjacency.size() + 1 == t.trapezoids.size());
        // Connected: union-find over adjacency.
        std::vector<std::size_t> parent(t.trapezoids.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
          while (parent[x] != x) x = parent[x] = parent[parent[x]];
          return x;
        };
        for (auto [a, b] : t.adjacency) parent[find(a)] = find(b);
        std::set<std::size_t> roots;
        for (std::size_t i = 0; i < parent.size(); ++i) roots.insert(find(i));
        CHECK(roots.size() == 1);
      }
    }
  }
}

TEST_CASE("area quantile") {
  const auto t = trapezoidize(lshape(), Axis::kVertical);
  CHECK(area_quantile(t, 1.5) == doctest::Approx(0.75));
  const auto tri = trapezoidize(triangle(), Axis::kHorizontal);
  const double y = area_quantile(tri, 1.5);
  CHECK(area_below(tri, y) == doctest::Approx(1.5));
}

TEST_CASE("perturbation removes diagonal alignments") {
  const auto h = square_with_hole();
  CHECK_FALSE(diagonal_alignments(h).empty());
  const auto p = perturb_domain(h, 1e-7 * h.diameter());
  CHECK(diagonal_alignments(p).empty());
  CHECK(p.area() == doctest::Approx(12.0).epsilon(1e-6));
}
