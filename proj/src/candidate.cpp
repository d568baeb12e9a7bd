#include "l1median/candidate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <utility>

namespace l1m {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::kL1Origin: return "l1-origin";
    case Provenance::kCellInterior: return "cell-interior";
    case Provenance::kEdgeInterior: return "edge-interior";
    case Provenance::kOverlayVertex: return "overlay-vertex";
  }
  return "unknown";
}

SolveResult finish_result(std::string metric, std::vector<Candidate> candidates, double merge_tol,
                          std::size_t evaluated) {
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.value, a.point.x, a.point.y) < std::tie(b.value, b.point.x, b.point.y);
  });
  // Points closer than merge_tol (per coordinate) are the same candidate;
  // the first one in (value, x, y) order is kept.
  std::map<std::pair<long long, long long>, std::vector<std::size_t>> cells;
  std::vector<Candidate> kept;
  for (const Candidate& c : candidates) {
    const long long gx = std::llround(std::floor(c.point.x / merge_tol));
    const long long gy = std::llround(std::floor(c.point.y / merge_tol));
    bool dup = false;
    for (long long dx = -1; dx <= 1 && !dup; ++dx) {
      for (long long dy = -1; dy <= 1 && !dup; ++dy) {
        const auto it = cells.find({gx + dx, gy + dy});
        if (it == cells.end()) continue;
        for (std::size_t k : it->second) {
          if (near(kept[k].point, c.point, merge_tol)) {
            dup = true;
            break;
          }
        }
      }
    }
    if (dup) continue;
    cells[{gx, gy}].push_back(kept.size());
    kept.push_back(c);
  }
  SolveResult out;
  out.metric = std::move(metric);
  out.optimum = kept.front();
  for (const Candidate& c : kept) {
    if (c.value <= out.optimum.value + kTieTolerance) out.ties.push_back(c);
  }
  out.candidates = std::move(kept);
  out.candidates_evaluated = evaluated;
  return out;
}

}  // namespace l1m
