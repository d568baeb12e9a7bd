// l1median: solve, inspect and check L1 Fermat-Weber instances.
//
// Exit codes: 0 ok, 1 invalid instance, 2 solver precondition violated,
// 3 degeneracy (rerun with --perturb), 4 check failed.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "io.hpp"
#include "l1median/objective.hpp"
#include "l1median/oracle.hpp"
#include "l1median/overlay.hpp"
#include "l1median/solver_holes.hpp"
#include "l1median/solver_simple.hpp"
#include "l1median/solver_straight.hpp"
#include "l1median/spm.hpp"
#include "l1median/svg.hpp"

using nlohmann::json;
using namespace l1m;
using namespace l1m::cli;

namespace {

struct RunConfig {
  std::string command;
  std::string input;
  std::string metric = "l1-geodesic";
  std::string solver = "auto";
  int grid = 128;
  int threads = 1;
  std::string out;
  std::string svg;
  std::string result;  // check: a record written by solve
  std::vector<double> at;
  bool perturb = false;
  bool no_meta = false;
  double tie_tolerance = kTieTolerance;
};

// A flag combination the chosen solver cannot honour.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSelfIntersection:
    case ErrorCode::kHoleOutsideOuter:
    case ErrorCode::kHolesOverlap:
    case ErrorCode::kDegenerateRing:
    case ErrorCode::kBadInput:
      return 1;
    case ErrorCode::kHasHoles:
    case ErrorCode::kPointOutsideDomain:
    case ErrorCode::kNotATree:
      return 2;
    default:
      return 3;
  }
}

Metric parse_metric(const std::string& name) {
  if (name == "l1-straight") return Metric::kStraight;
  if (name.rfind("l1-geodesic", 0) == 0) return Metric::kGeodesic;
  throw PreconditionError("unknown metric " + name);
}

const char* metric_name(Metric m) { return m == Metric::kStraight ? "l1-straight" : "l1-geodesic"; }

std::string pick_solver(const RunConfig& cfg, const PolygonalDomain& d, Metric m) {
  if (cfg.solver == "auto") {
    if (m == Metric::kStraight) return "straight";
    return d.has_holes() ? "holes" : "simple";
  }
  if (cfg.solver == "straight" && m != Metric::kStraight)
    throw PreconditionError("the straight solver needs --metric l1-straight");
  if ((cfg.solver == "simple" || cfg.solver == "holes") && m != Metric::kGeodesic)
    throw PreconditionError("the " + cfg.solver + " solver needs --metric l1-geodesic");
  return cfg.solver;
}

Point at_point(const RunConfig& cfg) {
  if (cfg.at.size() != 2) throw PreconditionError("--at needs X Y");
  return {cfg.at[0], cfg.at[1]};
}

SolveResult retie(SolveResult r, double tol) {
  r.ties.clear();
  for (const Candidate& c : r.candidates)
    if (c.value <= r.optimum.value + tol) r.ties.push_back(c);
  return r;
}

std::string spm_picture(const PolygonalDomain& d, Point z) {
  const VisibilityGraph g(d);
  return spm_svg(d, classify_watersheds(build_spm(g, z), g));
}

json solve(const RunConfig& cfg, const PolygonalDomain& d, std::string* svg) {
  const Metric m = parse_metric(cfg.metric);
  const std::string solver = pick_solver(cfg, d, m);
  if (solver == "oracle") {
    const OracleOptimum o = grid_search_optimum(d, m, make_grid(d, cfg.grid));
    json opt = point_json(o.point);
    opt["f"] = round12(o.value);
    opt["provenance"] = "oracle-grid";
    if (svg) *svg = spm_picture(d, o.point);
    return {{"metric", metric_name(m)}, {"optimum", opt}, {"candidates_evaluated", o.evaluations},
            {"ties", json::array({opt})}, {"bracket", bracket_json(o)}};
  }
  SolveResult r;
  if (solver == "straight") {
    r = solve_straight(d);
    if (svg) *svg = straight_svg(d, l1_origin(d), r);
  } else if (solver == "simple") {
    r = solve_simple(d);
    if (svg) *svg = simple_svg(d, r);
  } else {
    HolesOptions opts;
    opts.threads = cfg.threads;
    r = solve_holes(d, opts);
    if (svg) *svg = overlay_svg(d, build_overlay(d), r);
  }
  return result_json(retie(std::move(r), cfg.tie_tolerance));
}

json spm_record(const RunConfig& cfg, const PolygonalDomain& d, std::string* svg) {
  const Point z = at_point(cfg);
  const VisibilityGraph g(d);
  const ShortestPathMap spm = classify_watersheds(build_spm(g, z), g);
  json cells = json::array();
  for (const SpmCell& c : spm.cells) {
    if (c.area <= 0.0) continue;
    cells.push_back({{"root", c.root}, {"root_point", point_json(c.root_point)},
                     {"root_dist", round12(c.root_dist)}, {"area", round12(c.area)}});
  }
  json bisectors = json::array();
  for (const Bisector& b : spm.bisectors) {
    json chain = json::array();
    for (Point p : b.chain) chain.push_back(point_json(p));
    bisectors.push_back({{"roots", {b.root_a, b.root_b}},
                         {"kind", b.kind == BisectorKind::kWatershed ? "watershed" : "crossable"},
                         {"chain", chain}});
  }
  if (svg) *svg = spm_svg(d, spm);
  return {{"source", point_json(z)}, {"cells", cells}, {"bisectors", bisectors}};
}

json eval_record(const RunConfig& cfg, const PolygonalDomain& d) {
  const Metric m = parse_metric(cfg.metric);
  const Point z = at_point(cfg);
  const Evaluator ev(d, m);
  json j = {{"metric", metric_name(m)}, {"point", point_json(z)}, {"f", round12(ev.f(z).value)}};
  try {
    const Gradient g = ev.gradient(z);
    j["gradient"] = {{"fx", round12(g.fx)}, {"fy", round12(g.fy)}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegeneratePosition) throw;
    j["gradient"] = nullptr;  // f is not differentiable here
  }
  return j;
}

json oracle_record(const RunConfig& cfg, const PolygonalDomain& d) {
  const Metric m = parse_metric(cfg.metric);
  const GridSpec grid = make_grid(d, cfg.grid);
  json j = {{"metric", metric_name(m)}, {"grid", cfg.grid}};
  if (!cfg.at.empty()) {
    const Point z = at_point(cfg);
    const OracleEstimate e = integrate_average(d, z, m, grid);
    j["point"] = point_json(z);
    j["estimate"] = round12(e.estimate);
    j["error_bound"] = round12(e.error_bound);
  } else {
    j["bracket"] = bracket_json(grid_search_optimum(d, m, grid));
  }
  return j;
}

// Re-evaluates a reported optimum with the oracle: the value must match the
// integral at that point and lie in the oracle's bracket for the minimum.
json check_record(const RunConfig& cfg, const PolygonalDomain& d, bool* passed) {
  json reported;
  if (!cfg.result.empty()) {
    std::ifstream in(cfg.result);
    if (!in) throw Error(ErrorCode::kBadInput, "cannot read " + cfg.result);
    try {
      reported = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kBadInput, cfg.result + ": " + e.what());
    }
  } else {
    reported = solve(cfg, d, nullptr);
  }
  if (!reported.contains("optimum") || !reported.contains("metric"))
    throw Error(ErrorCode::kBadInput, "result record needs \"metric\" and \"optimum\"");
  const Metric m = parse_metric(reported["metric"].get<std::string>());
  const Point z{reported["optimum"]["x"].get<double>(), reported["optimum"]["y"].get<double>()};
  const double f = reported["optimum"]["f"].get<double>();

  const GridSpec grid = make_grid(d, cfg.grid);
  const OracleEstimate at = integrate_average(d, z, m, grid);
  const OracleOptimum o = grid_search_optimum(d, m, grid);
  // Records carry 12 significant digits.
  const double slop = 1e-11 * std::max(1.0, std::abs(f));
  const bool value_ok = std::abs(at.estimate - f) <= at.error_bound + slop;
  const bool bracket_ok = o.lower - slop <= f && f <= o.upper + slop;
  *passed = value_ok && bracket_ok;
  return {{"metric", metric_name(m)},
          {"point", point_json(z)},
          {"f", round12(f)},
          {"estimate_at_point", round12(at.estimate)},
          {"error_bound", round12(at.error_bound)},
          {"bracket", bracket_json(o)},
          {"value_matches", value_ok},
          {"in_bracket", bracket_ok},
          {"status", *passed ? "pass" : "fail"}};
}

std::string timestamp() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  PolygonalDomain d = load_instance(cfg.input);
  bool perturbed = false;
  if (cfg.perturb && !diagonal_alignments(d).empty()) {
    d = perturb_domain(d, 1e-7 * d.diameter());
    perturbed = true;
  }

  const bool want_svg = !cfg.svg.empty() || cfg.command == "render";
  std::string svg;
  json record;
  int code = 0;
  if (cfg.command == "solve" || cfg.command == "render") {
    if (cfg.command == "render" && !cfg.at.empty())
      svg = spm_picture(d, at_point(cfg));
    else
      record = solve(cfg, d, want_svg ? &svg : nullptr);
  } else if (cfg.command == "spm") {
    record = spm_record(cfg, d, want_svg ? &svg : nullptr);
  } else if (cfg.command == "eval") {
    record = eval_record(cfg, d);
  } else if (cfg.command == "oracle") {
    record = oracle_record(cfg, d);
  } else if (cfg.command == "check") {
    bool passed = false;
    record = check_record(cfg, d, &passed);
    code = passed ? 0 : 4;
  }

  if (cfg.command == "render") {
    if (cfg.svg.empty() && cfg.out.empty())
      std::cout << svg;
    else
      write_text(cfg.svg.empty() ? cfg.out : cfg.svg, svg);
    return code;
  }
  if (!cfg.svg.empty()) {
    if (svg.empty()) throw PreconditionError("no picture for command " + cfg.command);
    write_text(cfg.svg, svg);
  }
  if (perturbed) record["perturbed"] = true;
  if (!cfg.no_meta) {
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    record["meta"] = {{"tool", "l1median"}, {"timestamp", timestamp()}, {"elapsed_ms", round12(ms)}};
  }
  const std::string text = record.dump(2) + "\n";
  if (cfg.out.empty())
    std::cout << text;
  else
    write_text(cfg.out, text);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L1 Fermat-Weber center of a polygonal domain"};
  app.require_subcommand(1);
  RunConfig cfg;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve", "find the optimal center"},
      {"spm", "shortest path map from --at X Y"},
      {"eval", "objective and gradient at --at X Y"},
      {"oracle", "grid oracle bracket for the optimum, or the average at --at X Y"},
      {"check", "re-evaluate a solve record with the oracle"},
      {"render", "SVG diagnostics only"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("input", cfg.input, "instance JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--metric", cfg.metric, "l1-straight or l1-geodesic")
        ->check(CLI::IsMember({"l1-straight", "l1-geodesic"}));
    sub->add_option("--solver", cfg.solver)->check(CLI::IsMember({"auto", "straight", "simple", "holes", "oracle"}));
    sub->add_option("--grid", cfg.grid, "oracle grid resolution")->check(CLI::Range(16, 4096));
    sub->add_option("--threads", cfg.threads)->check(CLI::Range(1, 256));
    sub->add_option("--out", cfg.out, "write the record here instead of stdout");
    sub->add_option("--svg", cfg.svg, "write SVG diagnostics");
    sub->add_option("--at", cfg.at, "query point X Y")->expected(2)->allow_extra_args(false);
    sub->add_option("--result", cfg.result, "record from solve (check only)");
    sub->add_option("--tie-tolerance", cfg.tie_tolerance)->check(CLI::NonNegativeNumber);
    sub->add_flag("--perturb", cfg.perturb, "jitter vertices on common diagonals by 1e-7 * diameter");
    sub->add_flag("--no-meta", cfg.no_meta, "omit timestamp and timing");
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    return run(cfg);
  } catch (const Error& e) {
    std::cerr << "l1median: " << e.what() << "\n";
    const int code = exit_code(e.code());
    if (code == 3) std::cerr << "l1median: degenerate input, rerun with --perturb\n";
    return code;
  } catch (const PreconditionError& e) {
    std::cerr << "l1median: " << e.what() << "\n";
    return 2;
  }
}
