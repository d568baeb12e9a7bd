#pragma once

// Static SVG diagnostics. Every drawing is a set of named <g> layers; the
// y axis is flipped so the picture matches the usual math orientation.

#include <string>
#include <vector>

#include "l1median/candidate.hpp"
#include "l1median/domain.hpp"
#include "l1median/overlay.hpp"
#include "l1median/solver_straight.hpp"
#include "l1median/spm.hpp"

namespace l1m {

class SvgCanvas {
 public:
  SvgCanvas(Point lo, Point hi, double width_px = 600.0);

  void polygon(const std::string& layer, const Ring& ring, const std::string& style);
  void polyline(const std::string& layer, const std::vector<Point>& pts, const std::string& style);
  void circle(const std::string& layer, Point c, double radius_px, const std::string& style);
  /// The document, layers in order of first use.
  std::string str() const;

 private:
  std::string coords(Point p) const;
  std::string& layer(const std::string& name);

  Point lo_;
  Point hi_;
  double scale_ = 1.0;
  double margin_ = 10.0;
  std::vector<std::pair<std::string, std::string>> layers_;
};

/// Layers "domain", "cells", "bisectors" (crossable, solid), "watersheds"
/// (dashed) and "source".
std::string spm_svg(const PolygonalDomain& domain, const ShortestPathMap& spm);

/// Layers "domain", "overlay", "candidates" and "optimum".
std::string overlay_svg(const PolygonalDomain& domain, const OverlaySubdivision& overlay,
                        const SolveResult& result);

/// Layers "domain", "grid" (vertex lines), "origin", "candidates" and "optimum".
std::string straight_svg(const PolygonalDomain& domain, const L1Origin& origin, const SolveResult& result);

/// Layers "domain", "chords" and "optimum".
std::string simple_svg(const PolygonalDomain& domain, const SolveResult& result);

}  // namespace l1m
