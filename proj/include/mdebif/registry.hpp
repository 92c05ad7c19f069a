#ifndef MDEBIF_REGISTRY_HPP
#define MDEBIF_REGISTRY_HPP

#include <string>
#include <vector>

#include "mdebif/problem.hpp"

namespace mdebif {

/// Names of the built-in problems: "example-5.7" (impulsive scalar Riccati
/// with a unit jump at t = 1/2) and "liebau" (planar valveless-pumping system
/// with a jump at t = pi).  Registry names are stable public API.
std::vector<std::string> builtin_names();

bool is_builtin(const std::string& name);

/// Construct a registry problem; throws ValidationError for unknown names.
ProblemDef builtin_problem(const std::string& name);

} // namespace mdebif

#endif
