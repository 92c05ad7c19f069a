#include "mdebif/registry.hpp"

#include <numbers>

namespace mdebif {

std::vector<std::string> builtin_names() { return {"example-5.7", "liebau"}; }

bool is_builtin(const std::string& name) {
    for (const auto& n : builtin_names())
        if (n == name) return true;
    return false;
}

ProblemDef builtin_problem(const std::string& name) {
    if (name == "example-5.7") {
        // Scalar x' = lambda b(t) x + c(t) x^2 with b = c = 1, a unit jump of
        // h at t = 1/2 acting through g = x^2, period 1.  The trivial branch
        // x = 0 exists for every lambda and loses its index at lambda = 0.
        return ProblemDef(1, 1.0, {parse("lambda*x1 + x1^2", 1)}, {parse("x1^2", 1)},
                          Integrator(parse("0", 0), {{0.5, 1.0}}, 1.0), {-1.0, 1.0},
                          {{{-2.0, 2.0}}},
                          "impulsive scalar Riccati equation with unit jump at t = 1/2");
    }
    if (name == "liebau") {
        const double pi = std::numbers::pi;
        return ProblemDef(
            2, 2.0 * pi,
            {parse("x2", 2),
             parse("lambda*((2 + cos(t))*x2 + 3*sin(t)*x1)"
                   " + (6.6 - 5.7*cos(t) - 9*cos(t)^2)*x1^(1/3) - 0.3*x1^(2/3)",
                   2)},
            {parse("2*x1^3 - x1^2 - 4*x1 + 3", 2), parse("0", 2)},
            Integrator(parse("0", 0), {{pi, 1.0}}, 2.0 * pi), {-1.0, 1.0},
            {{{0.5, 28.0}}, {{-20.0, 20.0}}},
            "planar valveless-pumping model with state jump at t = pi; "
            "x = ((2 + cos t)^3, -3 sin t (2 + cos t)^2) is periodic for every lambda");
    }
    throw ValidationError("unknown registry problem '" + name + "'");
}

} // namespace mdebif
