#pragma once

// Brute-force reference values: midpoint-rule integration of the average
// distance and an exhaustive grid search for its minimum. Geodesic distances
// are computed here by a separate visibility-graph Dijkstra that shares no
// code with the shortest-path-map module.

#include <cstddef>

#include "l1median/domain.hpp"

namespace l1m {

/// Integration error constant c in error_bound = c * diameter / N.
inline constexpr double kOracleErrorConstant = 2.0;

struct GridSpec {
  int resolution = 64;       // cells per axis of the bounding square
  double error_bound = 0.0;  // kOracleErrorConstant * diameter / resolution
};

/// Throws kBadInput when n < 16.
GridSpec make_grid(const PolygonalDomain& domain, int n);

struct OracleEstimate {
  double estimate = 0.0;
  double error_bound = 0.0;
};

/// Midpoint-rule average of d(z, p) over the grid cells inside the domain.
/// Cells crossing the boundary are supersampled 4x4. Throws kPointOutsideDomain.
OracleEstimate integrate_average(const PolygonalDomain& domain, Point z, Metric metric,
                                 const GridSpec& grid);

struct OracleOptimum {
  Point point;
  double value = 0.0;  // minimum of the grid estimate over feasible grid points
  double slack = 0.0;  // grid cell diagonal (L1)
  double error_bound = 0.0;
  double lower = 0.0;  // value - slack - error_bound
  double upper = 0.0;  // value + error_bound
  std::size_t evaluations = 0;
};

/// Minimum of integrate_average over all feasible grid cell centres. The
/// estimate is itself 1-Lipschitz in the metric, so branch and bound over
/// blocks of grid points returns the exact grid minimum.
OracleOptimum grid_search_optimum(const PolygonalDomain& domain, Metric metric, const GridSpec& grid);

/// Clean-room geodesic L1 distance. Throws kPointOutsideDomain.
double oracle_geodesic_distance(const PolygonalDomain& domain, Point a, Point b);

}  // namespace l1m
