#ifndef MDEBIF_PROBLEM_HPP
#define MDEBIF_PROBLEM_HPP

#include <array>
#include <string>
#include <vector>

#include "mdebif/expr.hpp"
#include "mdebif/integrator.hpp"
#include "mdebif/types.hpp"

namespace mdebif {

/// Full problem definition for Dx = f(lambda,x,t) + g(x,t) Dh on [0, T]:
/// dimension, period, component expressions, integrator, parameter interval
/// and the open domain box Omega.
class ProblemDef {
public:
    /// Validates the signatures: f may use (t, lambda, x1..xn), g must not
    /// reference lambda, h.T must equal T, intervals/boxes must be nonempty.
    ProblemDef(int n, double T, std::vector<ExprPtr> f, std::vector<ExprPtr> g, Integrator h,
               std::array<double, 2> lambda_interval,
               std::vector<std::array<double, 2>> omega_box, std::string description = {});

    int n;
    double T;
    std::vector<ExprPtr> f;
    std::vector<ExprPtr> g;
    Integrator h;
    std::array<double, 2> lambda_interval;
    std::vector<std::array<double, 2>> omega_box;
    std::string description;

    bool lambda_in_range(double lambda) const;
    bool inside_omega(const Vec& x) const;

    Vec eval_f(double lambda, const Vec& x, double t) const;
    Vec eval_g(const Vec& x, double t) const;
};

/// Numerical knobs of the initial value solver.
struct SolveSettings {
    double rk_tol = 1e-9;
    double max_step = 0.0;    // 0: no cap
    bool domain_check = true; // monitor the trajectory against omega_box
};

} // namespace mdebif

#endif
