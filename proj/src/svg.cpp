#include "l1median/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace l1m {

namespace {

const char* kPalette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
                          "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void draw_domain(SvgCanvas& svg, const PolygonalDomain& d) {
  svg.polygon("domain", d.outer(), "fill:#f7f7f7;stroke:#000;stroke-width:1.5");
  for (const Ring& h : d.holes()) svg.polygon("domain", h, "fill:#555;stroke:#000;stroke-width:1.5");
}

void draw_candidates(SvgCanvas& svg, const SolveResult& r) {
  for (const Candidate& c : r.candidates) {
    const char* colour = c.provenance == Provenance::kOverlayVertex  ? "#999"
                         : c.provenance == Provenance::kEdgeInterior ? "#1f78b4"
                                                                     : "#33a02c";
    svg.circle("candidates", c.point, 2.0, std::string("fill:") + colour);
  }
  for (const Candidate& c : r.ties) svg.circle("optimum", c.point, 5.0, "fill:#e31a1c;stroke:#000");
}

}  // namespace

SvgCanvas::SvgCanvas(Point lo, Point hi, double width_px) : lo_(lo), hi_(hi) {
  const double span = std::max({hi.x - lo.x, hi.y - lo.y, 1e-12});
  scale_ = width_px / span;
}

std::string SvgCanvas::coords(Point p) const {
  return fmt(margin_ + (p.x - lo_.x) * scale_) + "," + fmt(margin_ + (hi_.y - p.y) * scale_);
}

std::string& SvgCanvas::layer(const std::string& name) {
  for (auto& [n, body] : layers_) {
    if (n == name) return body;
  }
  layers_.emplace_back(name, std::string());
  return layers_.back().second;
}

void SvgCanvas::polygon(const std::string& name, const Ring& ring, const std::string& style) {
  std::string pts;
  for (const Point& p : ring) pts += coords(p) + " ";
  layer(name) += "  <polygon points=\"" + pts + "\" style=\"" + style + "\"/>\n";
}

void SvgCanvas::polyline(const std::string& name, const std::vector<Point>& line, const std::string& style) {
  std::string pts;
  for (const Point& p : line) pts += coords(p) + " ";
  layer(name) += "  <polyline points=\"" + pts + "\" style=\"fill:none;" + style + "\"/>\n";
}

void SvgCanvas::circle(const std::string& name, Point c, double radius_px, const std::string& style) {
  const std::string xy = coords(c);
  const auto comma = xy.find(',');
  layer(name) += "  <circle cx=\"" + xy.substr(0, comma) + "\" cy=\"" + xy.substr(comma + 1) + "\" r=\"" +
                 fmt(radius_px) + "\" style=\"" + style + "\"/>\n";
}

std::string SvgCanvas::str() const {
  const double w = (hi_.x - lo_.x) * scale_ + 2.0 * margin_;
  const double h = (hi_.y - lo_.y) * scale_ + 2.0 * margin_;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) + "\">\n";
  for (const auto& [name, body] : layers_) out += "<g id=\"" + name + "\">\n" + body + "</g>\n";
  return out + "</svg>\n";
}

std::string spm_svg(const PolygonalDomain& domain, const ShortestPathMap& spm) {
  SvgCanvas svg({domain.min_x(), domain.min_y()}, {domain.max_x(), domain.max_y()});
  draw_domain(svg, domain);
  for (std::size_t i = 0; i < spm.cells.size(); ++i) {
    const std::string style = std::string("fill:") + kPalette[i % std::size(kPalette)] + ";stroke:none";
    for (const Polygon& poly : spm.cells[i].region) svg.polygon("cells", poly.outer, style);
  }
  for (const Segment& s : spm.quadrant_chords) svg.polyline("cells", {s.a, s.b}, "stroke:#666;stroke-width:0.5");
  for (const Bisector& b : spm.bisectors) {
    if (b.kind == BisectorKind::kWatershed) {
      svg.polyline("watersheds", b.chain, "stroke:#d7191c;stroke-width:2;stroke-dasharray:6,3");
    } else {
      svg.polyline("bisectors", b.chain, "stroke:#2b83ba;stroke-width:1");
    }
  }
  svg.circle("source", spm.source, 4.0, "fill:#000");
  return svg.str();
}

std::string overlay_svg(const PolygonalDomain& domain, const OverlaySubdivision& overlay,
                        const SolveResult& result) {
  SvgCanvas svg({domain.min_x(), domain.min_y()}, {domain.max_x(), domain.max_y()});
  draw_domain(svg, domain);
  for (const auto& [a, b] : overlay.edges) {
    svg.polyline("overlay", {overlay.vertices[a], overlay.vertices[b]}, "stroke:#2b83ba;stroke-width:0.7");
  }
  draw_candidates(svg, result);
  return svg.str();
}

std::string straight_svg(const PolygonalDomain& domain, const L1Origin& origin, const SolveResult& result) {
  SvgCanvas svg({domain.min_x(), domain.min_y()}, {domain.max_x(), domain.max_y()});
  draw_domain(svg, domain);
  for (const Point& v : domain.vertices()) {
    for (Axis axis : {Axis::kVertical, Axis::kHorizontal}) {
      for (const Segment& s : domain_chords(domain, axis, axis == Axis::kVertical ? v.x : v.y)) {
        svg.polyline("grid", {s.a, s.b}, "stroke:#bbb;stroke-width:0.5");
      }
    }
  }
  svg.circle("origin", origin.point, 4.0, origin.feasible ? "fill:#33a02c" : "fill:none;stroke:#33a02c;stroke-width:2");
  draw_candidates(svg, result);
  return svg.str();
}

std::string simple_svg(const PolygonalDomain& domain, const SolveResult& result) {
  SvgCanvas svg({domain.min_x(), domain.min_y()}, {domain.max_x(), domain.max_y()});
  draw_domain(svg, domain);
  const Point z = result.optimum.point;
  for (const Segment& s : domain_chords(domain, Axis::kVertical, z.x)) {
    svg.polyline("chords", {s.a, s.b}, "stroke:#2b83ba;stroke-width:1");
  }
  for (const Segment& s : domain_chords(domain, Axis::kHorizontal, z.y)) {
    svg.polyline("chords", {s.a, s.b}, "stroke:#2b83ba;stroke-width:1");
  }
  for (const Candidate& c : result.ties) svg.circle("optimum", c.point, 5.0, "fill:#e31a1c;stroke:#000");
  return svg.str();
}

}  // namespace l1m
