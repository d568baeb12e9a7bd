#include "l1median/solver_holes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "l1median/poly.hpp"
#include "parallel.hpp"

namespace l1m {

namespace {

using Poly = std::vector<double>;  // ascending coefficients

Poly mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return a;
}

// Gradient of the cubic in local coordinates, scaled by the cubic's scale.
struct LocalGradient {
  const CubicPair& c;

  double p(double u, double v) const {
    return c.lx[1] + 2.0 * c.lx[2] * u + 3.0 * c.lx[3] * u * u + c.lm[0] * v + 2.0 * c.lm[1] * u * v +
           c.lm[2] * v * v;
  }
  double q(double u, double v) const {
    return c.ly[1] + 2.0 * c.ly[2] * v + 3.0 * c.ly[3] * v * v + c.lm[0] * u + c.lm[1] * u * u +
           2.0 * c.lm[2] * u * v;
  }
  // Newton on (p, q) = 0. Returns false if the Jacobian is singular.
  bool polish(double& u, double& v) const {
    for (int it = 0; it < 4; ++it) {
      const double pu = 2.0 * c.lx[2] + 6.0 * c.lx[3] * u + 2.0 * c.lm[1] * v;
      const double pv = c.lm[0] + 2.0 * c.lm[1] * u + 2.0 * c.lm[2] * v;
      const double qv = 2.0 * c.ly[2] + 6.0 * c.ly[3] * v + 2.0 * c.lm[2] * u;
      const double det = pu * qv - pv * pv;  // the Hessian is symmetric
      if (det == 0.0 || !std::isfinite(det)) return false;
      const double fp = p(u, v);
      const double fq = q(u, v);
      u -= (qv * fp - pv * fq) / det;
      v -= (pu * fq - pv * fp) / det;
    }
    return std::isfinite(u) && std::isfinite(v);
  }
};

double coefficient_scale(const CubicPair& c) {
  double s = 0.0;
  for (double v : {c.lx[1], c.lx[2], c.lx[3], c.ly[1], c.ly[2], c.ly[3], c.lm[0], c.lm[1], c.lm[2]}) {
    s = std::max(s, std::abs(v));
  }
  return s;
}

double boundary_distance(const Ring& ring, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    best = std::min(best, point_segment_distance(p, ring[i], ring[(i + 1) % ring.size()]));
  }
  return best;
}

constexpr double kFitTolerance = 1e-9;  // relative to f at the cell centre

bool fit_ok(const CubicPair& c) { return c.residual <= kFitTolerance * std::abs(c.f_scale); }

// Newton on the exact gradient with a finite-difference Jacobian. Used where
// the face cubic is only approximate, i.e. f breaks off a single cubic along
// lines the overlay does not draw. nullopt when the iteration leaves the face
// or meets a point where f is not differentiable.
std::optional<Point> polish_interior(const Evaluator& eval, const Ring& face, Point p, double scale) {
  const double h = 1e-7 * scale;
  try {
    for (int it = 0; it < 12; ++it) {
      const Gradient g = eval.gradient(p);
      if (std::hypot(g.fx, g.fy) <= 1e-13) break;
      const Gradient gx = eval.gradient(p + Point{h, 0});
      const Gradient gy = eval.gradient(p + Point{0, h});
      const double a = (gx.fx - g.fx) / h, b = (gy.fx - g.fx) / h;
      const double c = (gx.fy - g.fy) / h, d = (gy.fy - g.fy) / h;
      const double det = a * d - b * c;
      if (std::abs(det) <= 1e-12 * (std::abs(a * d) + std::abs(b * c))) return std::nullopt;
      Point step{(d * g.fx - b * g.fy) / det, (a * g.fy - c * g.fx) / det};
      const double len = std::hypot(step.x, step.y);
      if (len > scale) step = (scale / len) * step;
      p = p - step;
      if (!point_in_ring(face, p)) return std::nullopt;
      if (len <= 1e-13 * scale) break;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegeneratePosition && e.code() != ErrorCode::kPointOutsideDomain) throw;
    return std::nullopt;
  }
  return p;
}

// Secant iteration on the exact directional derivative along a -> b.
std::optional<double> polish_edge(const Evaluator& eval, Point a, Point b, double t) {
  const Point dir = b - a;
  auto slope = [&](double s) {
    const Gradient g = eval.gradient(a + s * dir);
    return g.fx * dir.x + g.fy * dir.y;
  };
  try {
    double t0 = t, t1 = std::min(1.0, t + 1e-6);
    if (t1 == t0) t1 = t - 1e-6;
    double s0 = slope(t0), s1 = slope(t1);
    for (int it = 0; it < 20 && s1 != s0; ++it) {
      const double t2 = t1 - s1 * (t1 - t0) / (s1 - s0);
      if (!(t2 > 0.0 && t2 < 1.0)) return std::nullopt;
      t0 = t1, s0 = s1;
      t1 = t2, s1 = slope(t2);
      if (std::abs(t1 - t0) <= 1e-14) break;
    }
    return t1;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegeneratePosition && e.code() != ErrorCode::kPointOutsideDomain) throw;
    return std::nullopt;
  }
}

}  // namespace

std::vector<Point> cubic_critical_points(const CubicPair& c) {
  std::vector<std::array<double, 2>> local;
  if (c.separable()) {
    const auto us = solve_quadratic(3.0 * c.lx[3], 2.0 * c.lx[2], c.lx[1]);
    const auto vs = solve_quadratic(3.0 * c.ly[3], 2.0 * c.ly[2], c.ly[1]);
    for (double u : us) {
      for (double v : vs) local.push_back({u, v});
    }
  } else {
    // p and q as quadratics in v with coefficients polynomial in u; their
    // common roots are the real roots of the resultant in u.
    const Poly a2{c.lm[2]};
    const Poly a1{c.lm[0], 2.0 * c.lm[1]};
    const Poly a0{c.lx[1], 2.0 * c.lx[2], 3.0 * c.lx[3]};
    const Poly b2{3.0 * c.ly[3]};
    const Poly b1{2.0 * c.ly[2], 2.0 * c.lm[2]};
    const Poly b0{c.ly[1], c.lm[0], c.lm[1]};
    const Poly r20 = sub(mul(a2, b0), mul(a0, b2));
    const Poly r21 = sub(mul(a2, b1), mul(a1, b2));
    const Poly r10 = sub(mul(a1, b0), mul(a0, b1));
    const Poly res = sub(mul(r20, r20), mul(r21, r10));

    const LocalGradient g{c};
    const double s = coefficient_scale(c);
    double res_scale = 0.0;
    for (double v : res) res_scale = std::max(res_scale, std::abs(v));
    std::vector<std::array<double, 2>> seeds;
    if (res_scale > 1e-12 * s * s * s * s) {
      for (double u : real_roots(res)) {
        const double q2 = 3.0 * c.ly[3];
        const double q1 = 2.0 * c.ly[2] + 2.0 * c.lm[2] * u;
        const double q0 = c.ly[1] + c.lm[0] * u + c.lm[1] * u * u;
        const double p2 = c.lm[2];
        const double p1 = c.lm[0] + 2.0 * c.lm[1] * u;
        const double p0 = c.lx[1] + 2.0 * c.lx[2] * u + 3.0 * c.lx[3] * u * u;
        for (double v : solve_quadratic(q2, q1, q0)) seeds.push_back({u, v});
        for (double v : solve_quadratic(p2, p1, p0)) seeds.push_back({u, v});
      }
    } else {
      // The conics share a component; fall back to seeded Newton.
      for (int i = -3; i <= 3; ++i) {
        for (int j = -3; j <= 3; ++j) seeds.push_back({static_cast<double>(i), static_cast<double>(j)});
      }
    }
    for (auto [u, v] : seeds) {
      if (!g.polish(u, v)) continue;
      if (std::abs(g.p(u, v)) + std::abs(g.q(u, v)) > 1e-8 * std::max(s, 1e-300)) continue;
      local.push_back({u, v});
    }
  }
  std::vector<Point> out;
  for (const auto& [u, v] : local) out.push_back(c.centre + c.scale * Point{u, v});
  return out;
}

std::vector<double> cubic_edge_critical(const CubicPair& c, Point a, Point b) {
  const Point d = b - a;
  auto along = [&](double t) {
    const Gradient g = c.gradient(a + t * d);
    return g.fx * d.x + g.fy * d.y;
  };
  // Exact quadratic through three samples of the directional derivative.
  const double g0 = along(0.0);
  const double gh = along(0.5);
  const double g1 = along(1.0);
  std::vector<double> out;
  for (double t : solve_quadratic(2.0 * g0 - 4.0 * gh + 2.0 * g1, -3.0 * g0 + 4.0 * gh - g1, g0)) {
    if (t > 1e-12 && t < 1.0 - 1e-12) out.push_back(t);
  }
  return out;
}

std::vector<std::optional<CubicPair>> fit_faces(const Evaluator& eval, const OverlaySubdivision& overlay,
                                                int threads) {
  std::vector<std::optional<CubicPair>> fits(overlay.faces.size());
  detail::parallel_for(fits.size(), threads, [&](std::size_t i) {
    try {
      fits[i] = fit_cell_cubic(eval, overlay.faces[i]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCellTooThin && e.code() != ErrorCode::kIllConditionedFit) throw;
    }
  });
  return fits;
}

SolveResult solve_holes(const Evaluator& eval, const OverlaySubdivision& overlay,
                        const std::vector<std::optional<CubicPair>>& fits, int threads) {
  const PolygonalDomain& domain = eval.domain();
  const double tol = kEpsGeom * std::max(1.0, domain.diameter());

  std::vector<Candidate> cands;
  for (const Point& v : overlay.vertices) {
    Candidate c;
    c.point = v;
    c.provenance = Provenance::kOverlayVertex;
    cands.push_back(c);
  }
  for (std::size_t f = 0; f < overlay.faces.size(); ++f) {
    if (!fits[f]) continue;
    const CubicPair& cubic = *fits[f];
    const Ring& face = overlay.faces[f];
    const bool exact = fit_ok(cubic);
    for (const Point& p : cubic_critical_points(cubic)) {
      if (!point_in_ring(face, p) || boundary_distance(face, p) <= tol) continue;
      Candidate c;
      c.point = p;
      c.provenance = Provenance::kCellInterior;
      cands.push_back(c);
      if (exact) continue;
      if (const auto q = polish_interior(eval, face, p, cubic.scale)) {
        c.point = *q;
        cands.push_back(c);
      }
    }
    for (std::size_t i = 0; i < face.size(); ++i) {
      const Point a = face[i];
      const Point b = face[(i + 1) % face.size()];
      for (double t : cubic_edge_critical(cubic, a, b)) {
        Candidate c;
        c.point = a + t * (b - a);
        c.provenance = Provenance::kEdgeInterior;
        c.edge = static_cast<int>(f);
        c.t = t;
        cands.push_back(c);
        if (exact) continue;
        if (const auto s = polish_edge(eval, a, b, t)) {
          c.point = a + *s * (b - a);
          c.t = *s;
          cands.push_back(c);
        }
      }
    }
  }

  std::vector<char> ok(cands.size(), 1);
  detail::parallel_for(cands.size(), threads, [&](std::size_t i) {
    try {
      cands[i].value = eval.f(cands[i].point).value;
    } catch (const Error& e) {
      // Snapped vertices can land a rounding step outside the domain.
      if (e.code() != ErrorCode::kPointOutsideDomain) throw;
      ok[i] = 0;
    }
  });
  std::vector<Candidate> kept;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (ok[i]) kept.push_back(cands[i]);
  }
  const std::size_t evaluated = cands.size();
  return finish_result("l1-geodesic", std::move(kept), tol, evaluated);
}

SolveResult solve_holes(const PolygonalDomain& domain, const HolesOptions& options) {
  const Evaluator eval(domain, Metric::kGeodesic);
  OverlayOptions oo;
  oo.extra = options.extra;
  const OverlaySubdivision overlay = build_overlay(eval.graph(), oo);
  const auto fits = fit_faces(eval, overlay, options.threads);
  return solve_holes(eval, overlay, fits, options.threads);
}

}  // namespace l1m
