#pragma once

// Fixtures and random instance generators shared by the test binaries.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "l1median/domain.hpp"

namespace l1m::testing {

inline PolygonalDomain unit_square() { return validate_domain({{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}); }

inline PolygonalDomain lshape() {
  return validate_domain({{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}});
}

inline PolygonalDomain square_with_hole() {
  return validate_domain({{{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{1, 1}, {3, 1}, {3, 3}, {1, 3}}});
}

inline PolygonalDomain triangle() { return validate_domain({{{0, 0}, {3, 0}, {1, 2}}}); }

/// Star-shaped polygon around `c` with n vertices at sorted random angles.
inline Ring random_star(std::mt19937_64& rng, int n, Point c, double rmin, double rmax) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> rad(rmin, rmax);
  std::vector<double> a(static_cast<std::size_t>(n));
  for (double& x : a) x = ang(rng);
  std::sort(a.begin(), a.end());
  Ring r;
  for (double t : a) {
    const double rr = rad(rng);
    r.push_back({c.x + rr * std::cos(t), c.y + rr * std::sin(t)});
  }
  return r;
}

inline bool well_separated(const PolygonalDomain& d) {
  // Keep generated instances away from near-degenerate configurations.
  const auto& v = d.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (std::abs(v[i].x - v[j].x) < 1e-3 || std::abs(v[i].y - v[j].y) < 1e-3) return false;
      if (std::abs(std::abs(v[i].x - v[j].x) - std::abs(v[i].y - v[j].y)) < 1e-3) return false;
    }
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (const Edge& e : d.edges()) {
      if (static_cast<std::size_t>(e.id) == i || d.next_vertex(static_cast<std::size_t>(e.id)) == i)
        continue;
      if (point_segment_distance(v[i], e.a, e.b) < 0.05) return false;
    }
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point p = v[d.prev_vertex(i)];
    const Point q = v[d.next_vertex(i)];
    const double ang = std::abs(orient(p, v[i], q)) / (euclid(p, v[i]) * euclid(v[i], q));
    if (ang < 0.05) return false;
  }
  return true;
}

/// Random valid domain with `n_outer` outer vertices and `holes` small
/// star-shaped holes of 3-4 vertices each, in general position.
inline PolygonalDomain random_domain(std::mt19937_64& rng, int n_outer, int holes) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> hn(3, 4);
  for (;;) {
    std::vector<Ring> rings{random_star(rng, n_outer, {0, 0}, 1.5, 4.0)};
    try {
      validate_domain(rings);
    } catch (const Error&) {
      continue;
    }
    bool ok = true;
    for (int h = 0; h < holes && ok; ++h) {
      ok = false;
      for (int tries = 0; tries < 50 && !ok; ++tries) {
        const Point c{u(rng), u(rng)};
        auto cand = rings;
        cand.push_back(random_star(rng, hn(rng), c, 0.25, 0.7));
        try {
          PolygonalDomain d = validate_domain(cand);
          rings = std::move(cand);
          ok = true;
        } catch (const Error&) {
        }
      }
    }
    if (!ok) continue;
    PolygonalDomain d = validate_domain(rings);
    if (well_separated(d)) return d;
  }
}

inline PolygonalDomain random_simple(std::mt19937_64& rng, int n) { return random_domain(rng, n, 0); }

/// Large simple polygons for scaling runs: jittered regular angles so that
/// neighbouring vertices never crowd, with coordinate-coincidence guards
/// scaled down for the larger vertex count.
inline PolygonalDomain random_simple_large(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::uniform_real_distribution<double> rad(2.0, 4.0);
  const double step = 2.0 * std::numbers::pi / n;
  for (;;) {
    Ring r;
    for (int i = 0; i < n; ++i) {
      const double t = (i + jitter(rng)) * step;
      const double rr = rad(rng);
      r.push_back({rr * std::cos(t), rr * std::sin(t)});
    }
    PolygonalDomain d;
    try {
      d = validate_domain({r});
    } catch (const Error&) {
      continue;
    }
    const auto& v = d.vertices();
    bool ok = true;
    for (std::size_t i = 0; i < v.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < v.size() && ok; ++j) {
        const double dx = std::abs(v[i].x - v[j].x);
        const double dy = std::abs(v[i].y - v[j].y);
        ok = dx > 1e-6 && dy > 1e-6 && std::abs(dx - dy) > 1e-6;
      }
    }
    if (ok) return d;
  }
}

/// Uniform random point inside the domain (rejection sampling).
inline Point random_point_in(std::mt19937_64& rng, const PolygonalDomain& d) {
  std::uniform_real_distribution<double> ux(d.min_x(), d.max_x());
  std::uniform_real_distribution<double> uy(d.min_y(), d.max_y());
  for (;;) {
    const Point p{ux(rng), uy(rng)};
    if (locate(d, p) == Location::kInterior) return p;
  }
}

}  // namespace l1m::testing
