#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace l1m::cli {

using nlohmann::json;

namespace {

Ring parse_ring(const json& j, const std::string& what) {
  if (!j.is_array()) throw Error(ErrorCode::kBadInput, what + " is not a list of points");
  Ring ring;
  for (const json& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw Error(ErrorCode::kBadInput, what + " has a point that is not [x, y]");
    const double x = p[0].get<double>();
    const double y = p[1].get<double>();
    if (!std::isfinite(x) || !std::isfinite(y) || std::abs(x) > 1e6 || std::abs(y) > 1e6)
      throw Error(ErrorCode::kBadInput, what + " has a coordinate outside [-1e6, 1e6]");
    ring.push_back({x, y});
  }
  return ring;
}

}  // namespace

PolygonalDomain parse_instance(const json& j) {
  if (!j.is_object() || !j.contains("outer")) throw Error(ErrorCode::kBadInput, "instance needs an \"outer\" ring");
  std::vector<Ring> rings{parse_ring(j["outer"], "outer")};
  if (j.contains("holes")) {
    const json& holes = j["holes"];
    if (!holes.is_array()) throw Error(ErrorCode::kBadInput, "\"holes\" is not a list");
    for (std::size_t i = 0; i < holes.size(); ++i) rings.push_back(parse_ring(holes[i], "hole " + std::to_string(i)));
  }
  return validate_domain(rings);
}

PolygonalDomain load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kBadInput, "cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kBadInput, path + ": " + e.what());
  }
  return parse_instance(j);
}

double round12(double v) {
  if (v == 0.0) return 0.0;  // also drops the sign of -0
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

json point_json(Point p) { return {{"x", round12(p.x)}, {"y", round12(p.y)}}; }

json candidate_json(const Candidate& c) {
  json j = point_json(c.point);
  j["f"] = round12(c.value);
  j["provenance"] = to_string(c.provenance);
  return j;
}

json result_json(const SolveResult& r) {
  json ties = json::array();
  for (const Candidate& c : r.ties) ties.push_back(candidate_json(c));
  return {{"metric", r.metric},
          {"optimum", candidate_json(r.optimum)},
          {"candidates_evaluated", r.candidates_evaluated},
          {"ties", ties}};
}

json bracket_json(const OracleOptimum& o) {
  return {{"point", point_json(o.point)},   {"value", round12(o.value)},
          {"lower", round12(o.lower)},      {"upper", round12(o.upper)},
          {"slack", round12(o.slack)},      {"error_bound", round12(o.error_bound)},
          {"evaluations", o.evaluations}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kBadInput, "cannot write " + path);
  out << text;
}

}  // namespace l1m::cli
