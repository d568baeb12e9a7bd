#pragma once

// Geodesic L1 median of a domain with holes. The objective is a cubic on
// most faces of the overlay subdivision, so the optimum is a critical point
// inside a face, a critical point along a face edge, or an overlay vertex.
// Where a face fit misses (f also breaks along some lines the overlay does
// not draw), the cubic's critical points seed Newton on the exact gradient.

#include <optional>
#include <vector>

#include "l1median/candidate.hpp"
#include "l1median/objective.hpp"
#include "l1median/overlay.hpp"

namespace l1m {

struct HolesOptions {
  int threads = 1;
  std::vector<Segment> extra;  // added to the overlay, e.g. for refinement
};

/// Cubic fits for every overlay face, in face order. Faces thinner than
/// 1e-7 * diameter, or whose samples give a singular system, get nullopt.
std::vector<std::optional<CubicPair>> fit_faces(const Evaluator& eval, const OverlaySubdivision& overlay,
                                                int threads = 1);

/// All real points where both partial derivatives of the cubic vanish, in
/// no particular order and without a membership filter. Separable cubics
/// pair the roots of the two axis quadratics; otherwise the two gradient
/// conics are intersected through their resultant.
std::vector<Point> cubic_critical_points(const CubicPair& cubic);

/// Parameters t in (0, 1) where the cubic's derivative along a -> b vanishes.
std::vector<double> cubic_edge_critical(const CubicPair& cubic, Point a, Point b);

SolveResult solve_holes(const PolygonalDomain& domain, const HolesOptions& options = {});

/// The same search on a prebuilt overlay and its fits.
SolveResult solve_holes(const Evaluator& eval, const OverlaySubdivision& overlay,
                        const std::vector<std::optional<CubicPair>>& fits, int threads = 1);

}  // namespace l1m
