#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>

#include "l1median/oracle.hpp"
#include "l1median/spm.hpp"
#include "l1median/svg.hpp"
#include "test_support.hpp"

using namespace l1m;
using namespace l1m::testing;

namespace {

PolygonalDomain two_holes() {
  return validate_domain({{{0, 0}, {10, 0}, {10, 8}, {0, 8}},
                          {{2.1, 2.3}, {3.9, 2.2}, {4.1, 5.7}, {2.25, 5.93}},
                          {{6.37, 1.72}, {8.2, 1.9}, {7.9, 6.1}, {6.1, 5.8}}});
}

std::vector<Bisector> watersheds(const ShortestPathMap& spm) {
  std::vector<Bisector> out;
  for (const Bisector& b : spm.bisectors) {
    if (b.kind == BisectorKind::kWatershed) out.push_back(b);
  }
  return out;
}

// Connected components of chains that share an endpoint.
int chain_components(const std::vector<Bisector>& chains) {
  std::vector<int> parent(chains.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
    return i;
  };
  for (std::size_t i = 0; i < chains.size(); ++i) {
    for (std::size_t j = i + 1; j < chains.size(); ++j) {
      bool touch = false;
      for (Point p : {chains[i].chain.front(), chains[i].chain.back()}) {
        for (Point q : {chains[j].chain.front(), chains[j].chain.back()}) touch = touch || near(p, q, 1e-7);
      }
      if (touch) parent[static_cast<std::size_t>(find(static_cast<int>(i)))] = find(static_cast<int>(j));
    }
  }
  int count = 0;
  for (std::size_t i = 0; i < parent.size(); ++i) count += find(static_cast<int>(i)) == static_cast<int>(i);
  return count;
}

// d(root, p) + root distance, i.e. the distance a bisector piece compares.
double via(const PolygonalDomain& d, const GeodesicLabeling& labels, int root, Point p) {
  if (root == kSourceRoot) return l1_distance(labels.source, p);
  return labels.dist[static_cast<std::size_t>(root)] + l1_distance(d.vertices()[static_cast<std::size_t>(root)], p);
}

}  // namespace

TEST_CASE("geodesic distance examples") {
  CHECK(geodesic_distance(unit_square(), {0, 0}, {1, 1}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(geodesic_distance(square_with_hole(), {0, 2}, {4, 2}) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(geodesic_distance(square_with_hole(), {0.5, 0.5}, {0.5, 0.5}) == 0.0);
  CHECK(oracle_geodesic_distance(square_with_hole(), {0, 2}, {4, 2}) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK_THROWS_AS(geodesic_distance(square_with_hole(), {2, 2}, {0, 0}), Error);
}

TEST_CASE("visible pairs get the straight L1 distance and axioms hold") {
  std::mt19937_64 rng(11);
  for (int holes : {0, 1, 2}) {
    const auto d = random_domain(rng, 9, holes);
    const VisibilityGraph g(d);
    int visible = 0;
    for (int k = 0; k < 100; ++k) {
      const Point a = random_point_in(rng, d);
      const Point b = random_point_in(rng, d);
      const double dg = geodesic_distance(g, a, b);
      if (segment_in_domain(d, a, b)) {
        ++visible;
        CHECK(dg == l1_distance(a, b));
      }
      CHECK(dg >= l1_distance(a, b) - 1e-12);
      CHECK(dg == doctest::Approx(geodesic_distance(g, b, a)).epsilon(1e-12));
      CHECK(dg == doctest::Approx(oracle_geodesic_distance(d, a, b)).epsilon(1e-9));
      const Point c = random_point_in(rng, d);
      CHECK(dg <= geodesic_distance(g, a, c) + geodesic_distance(g, c, b) + 1e-9);
    }
    CHECK(visible > 10);
  }
}

TEST_CASE("SPM of the empty square is a single source cell") {
  const auto d = unit_square();
  const VisibilityGraph g(d);
  const auto spm = classify_watersheds(build_spm(g, {0.5, 0.5}), g);
  CHECK(spm.source_cell().area == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t v = 0; v < d.size(); ++v) CHECK(spm.vertex_cell(v).area == 0.0);
  CHECK(spm.quadrant_chords.size() == 4);
  CHECK(watersheds(spm).empty());
}

TEST_CASE("SPM around a square hole") {
  const auto d = square_with_hole();
  const VisibilityGraph g(d);
  const auto spm = classify_watersheds(build_spm(g, {0, 2}), g);
  for (std::size_t v = 0; v < d.size(); ++v) {
    const Point p = d.vertices()[v];
    const bool hole_corner = d.vertex_ref(v).ring == 1;
    CHECK((spm.vertex_cell(v).area > 0.0) == hole_corner);
    if (hole_corner) CHECK(spm.vertex_cell(v).area == doctest::Approx(2.0).epsilon(1e-9));
    (void)p;
  }
  CHECK(spm.total_area() == doctest::Approx(12.0).epsilon(1e-9));

  // (3.5, 2) is reached equally around the bottom and the top of the hole.
  const auto& lab = spm.labels;
  int via_bottom = -1, via_top = -1;
  for (std::size_t v = 0; v < d.size(); ++v) {
    if (near(d.vertices()[v], {3, 1})) via_bottom = static_cast<int>(v);
    if (near(d.vertices()[v], {3, 3})) via_top = static_cast<int>(v);
  }
  REQUIRE(via_bottom >= 0);
  REQUIRE(via_top >= 0);
  CHECK(via(d, lab, via_bottom, {3.5, 2}) == doctest::Approx(via(d, lab, via_top, {3.5, 2})).epsilon(1e-12));

  const auto ws = watersheds(spm);
  REQUIRE(!ws.empty());
  CHECK(chain_components(ws) == 1);
  for (const Bisector& b : ws) {
    for (Point p : b.chain) {
      CHECK(p.y == doctest::Approx(2.0).epsilon(1e-9));
      CHECK(p.x >= 3.0 - 1e-9);
    }
  }
}

TEST_CASE("one watershed component per encircled hole") {
  const auto d = two_holes();
  REQUIRE(diagonal_alignments(d).empty());
  const VisibilityGraph g(d);
  const auto spm = classify_watersheds(build_spm(g, {0.5, 4.05}), g);
  CHECK(chain_components(watersheds(spm)) == 2);
}

TEST_CASE("SPM cells tile the domain and give exact distances") {
  std::mt19937_64 rng(21);
  for (int holes : {0, 1, 2}) {
    const auto d = random_domain(rng, 8, holes);
    const VisibilityGraph g(d);
    const Point z = random_point_in(rng, d);
    const auto spm = build_spm(g, z);
    CHECK(spm.total_area() == doctest::Approx(d.area()).epsilon(1e-6));
    for (int k = 0; k < 50; ++k) {
      const Point p = random_point_in(rng, d);
      // Root distance plus straight L1 to the root of the owning cell.
      int owner = -2;
      for (std::size_t c = 0; c < spm.cells.size() && owner == -2; ++c) {
        for (const Polygon& poly : spm.cells[c].region) {
          if (point_in_ring(poly.outer, p)) owner = spm.cells[c].root;
        }
      }
      REQUIRE(owner != -2);
      const SpmCell& cell = owner == kSourceRoot ? spm.source_cell() : spm.vertex_cell(static_cast<std::size_t>(owner));
      CHECK(cell.root_dist + l1_distance(cell.root_point, p) ==
            doctest::Approx(oracle_geodesic_distance(d, z, p)).epsilon(1e-9));
    }
  }
}

TEST_CASE("SPM from a boundary vertex") {
  const auto d = lshape();
  const VisibilityGraph g(d);
  const auto spm = build_spm(g, {2, 0});
  CHECK(spm.total_area() == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("bisector pieces are axis-parallel or diagonal") {
  std::mt19937_64 rng(5);
  for (int holes : {1, 2}) {
    const auto d = random_domain(rng, 8, holes);
    const VisibilityGraph g(d);
    const auto spm = classify_watersheds(build_spm(g, random_point_in(rng, d)), g);
    for (const Bisector& b : spm.bisectors) {
      for (std::size_t i = 0; i + 1 < b.chain.size(); ++i) {
        const Point v = b.chain[i + 1] - b.chain[i];
        const double len = std::abs(v.x) + std::abs(v.y);
        const bool ok = std::abs(v.x) <= 1e-7 * len || std::abs(v.y) <= 1e-7 * len ||
                        std::abs(std::abs(v.x) - std::abs(v.y)) <= 1e-7 * len;
        CHECK(ok);
      }
    }
  }
}

TEST_CASE("cardinal areas") {
  const auto sq = unit_square();
  const VisibilityGraph g(sq);
  auto a = cardinal_areas(g, {0.75, 0.5}, Metric::kStraight);
  CHECK(a.w == doctest::Approx(0.75));
  CHECK(a.e == doctest::Approx(0.25));
  CHECK(a.n == doctest::Approx(0.5));
  CHECK(a.s == doctest::Approx(0.5));
  a = cardinal_areas(g, {0.5, 0.5}, Metric::kStraight);
  CHECK(a.w == doctest::Approx(0.5));
  CHECK(a.e == doctest::Approx(0.5));

  const auto holed = square_with_hole();
  const VisibilityGraph gh(holed);
  const auto c = cardinal_areas(gh, {0.5, 2.0}, Metric::kGeodesic);
  CHECK(c.w < c.e);
  CHECK(c.n == doctest::Approx(c.s).epsilon(1e-9));
  CHECK(c.w + c.e == doctest::Approx(12.0).epsilon(1e-6));
  CHECK(c.n + c.s == doctest::Approx(12.0).epsilon(1e-6));
}

TEST_CASE("cardinal areas reject degenerate positions") {
  const auto holed = square_with_hole();
  const VisibilityGraph g(holed);
  CHECK_THROWS_AS(cardinal_areas(g, {0.5, 1.0}, Metric::kGeodesic), Error);
}

TEST_CASE("source shifts move bisectors by 0 or h") {
  // Each root distance has x-derivative +-1, so every bisector piece either
  // stays put or moves by exactly h horizontally.
  const double h = 1e-4;
  int moved = 0;
  for (int seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(static_cast<unsigned>(seed));
    const auto d = random_domain(rng, 8, seed % 3);
    const VisibilityGraph g(d);
    const Point z = random_point_in(rng, d);
    const auto spm = classify_watersheds(build_spm(g, z), g);
    const auto shifted = label_vertices(g, {z.x + h, z.y});
    GeodesicLabeling moved_labels = shifted;
    for (const Bisector& b : spm.bisectors) {
      for (std::size_t i = 0; i + 1 < b.chain.size(); ++i) {
        const Point q = 0.5 * (b.chain[i] + b.chain[i + 1]);
        auto gap = [&](const GeodesicLabeling& lab, Point p) {
          return via(d, lab, b.root_a, p) - via(d, lab, b.root_b, p);
        };
        const double e = 1e-6;
        const double rate = (gap(moved_labels, q + Point{e, 0}) - gap(moved_labels, q - Point{e, 0})) / (2 * e);
        if (std::abs(rate) < 1e-6) continue;  // horizontal piece
        const double dx = std::abs(gap(moved_labels, q) / rate) / h;
        const bool zero_or_one = std::abs(dx) < 1e-6 || std::abs(dx - 1.0) < 1e-6;
        CHECK(zero_or_one);
        if (dx > 0.5) {
          ++moved;
          CHECK(b.kind == BisectorKind::kWatershed);
        }
      }
    }
  }
  CHECK(moved >= 1);
}

TEST_CASE("SPM SVG has the documented layers") {
  const auto d = square_with_hole();
  const VisibilityGraph g(d);
  const std::string svg = spm_svg(d, classify_watersheds(build_spm(g, {0, 2}), g));
  for (const char* layer : {"cells", "bisectors", "watersheds"}) {
    CHECK(svg.find(std::string("<g id=\"") + layer + "\">") != std::string::npos);
  }
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
}
