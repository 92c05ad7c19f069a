#ifndef MDEBIF_REPORT_IO_HPP
#define MDEBIF_REPORT_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mdebif/bifurcation.hpp"
#include "mdebif/criteria.hpp"
#include "mdebif/problem.hpp"
#include "mdebif/shooting.hpp"

namespace mdebif {

using Json = nlohmann::ordered_json;

/// Settings block of a problem file (solver knobs plus the scan/shoot
/// tolerances the CLI consumes).
struct RunSettings {
    SolveSettings solve;
    double bisect_tol = 1e-8;
    double shoot_tol = 1e-10;
};

/// Deterministic serialization: keys in insertion order, numbers rendered
/// with %.17g so identical inputs produce byte-identical files.
std::string dump_json(const Json& j, int indent = 2);

/// Strict parsing: unknown keys are rejected at every level.
ProblemDef problem_from_json(const Json& j);
RunSettings settings_from_json(const Json& j);
Json problem_to_json(const ProblemDef& p);

Json monodromy_to_json(const MonodromyReport& rep);
Json shoot_to_json(const ShootResult& res);
Json scan_to_json(const ScanReport& rep);
Json criterion_to_json(const CriterionVerdict& v);
Json fredholm_to_json(const FredholmResult& res);

/// Path CSV: columns t, x1..xn, is_jump_left, is_jump_right; a uniform
/// `samples`-point grid plus a left/right row pair at every jump time.
void write_path_csv(std::ostream& os, const RegulatedPath& path, int samples = 1001);

/// Scan CSV: columns lambda, det_I_minus_M, index_sign.
void write_scan_csv(std::ostream& os, const ScanReport& rep);

} // namespace mdebif

#endif
