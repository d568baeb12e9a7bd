#pragma once

// Candidate optima and the result record shared by all solvers.

#include <string>
#include <vector>

#include "l1median/geometry.hpp"

namespace l1m {

enum class Provenance {
  kL1Origin,
  kCellInterior,   // simultaneous root of both partial derivatives
  kEdgeInterior,   // root of the derivative along an edge
  kOverlayVertex,  // vertex of the subdivision
};

const char* to_string(Provenance p);

struct Candidate {
  Point point;
  double value = 0.0;
  Provenance provenance = Provenance::kOverlayVertex;
  int edge = -1;     // kEdgeInterior: boundary edge id, or overlay face index in solve_holes
  double t = 0.0;    // parameter along that edge
};

/// Value ties are reported within this tolerance of the minimum.
inline constexpr double kTieTolerance = 1e-9;

struct SolveResult {
  std::string metric;  // "l1-straight", "l1-geodesic-simple" or "l1-geodesic"
  Candidate optimum;
  std::vector<Candidate> ties;        // includes the optimum
  std::vector<Candidate> candidates;  // distinct points, ordered by (value, x, y)
  std::size_t candidates_evaluated = 0;
};

/// Orders candidates by (value, x, y), drops duplicate points and fills in
/// optimum and ties. `candidates` must be non-empty.
SolveResult finish_result(std::string metric, std::vector<Candidate> candidates, double merge_tol,
                          std::size_t evaluated);

}  // namespace l1m
