#pragma once

// Instance files and result records for the command-line tool.

#include <string>

#include <json.hpp>

#include "l1median/candidate.hpp"
#include "l1median/domain.hpp"
#include "l1median/oracle.hpp"

namespace l1m::cli {

/// Reads {"outer": [[x,y],...], "holes": [[[x,y],...],...]} and validates it.
/// Malformed files throw Error(kBadInput); geometry errors come from
/// validate_domain.
PolygonalDomain load_instance(const std::string& path);
PolygonalDomain parse_instance(const nlohmann::json& j);

/// Rounds to 12 significant digits so records print the same digits on
/// every platform.
double round12(double v);

nlohmann::json point_json(Point p);
nlohmann::json candidate_json(const Candidate& c);
nlohmann::json result_json(const SolveResult& r);
nlohmann::json bracket_json(const OracleOptimum& o);

void write_text(const std::string& path, const std::string& text);

}  // namespace l1m::cli
