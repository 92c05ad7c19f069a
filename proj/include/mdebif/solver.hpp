#ifndef MDEBIF_SOLVER_HPP
#define MDEBIF_SOLVER_HPP

#include "mdebif/path.hpp"
#include "mdebif/problem.hpp"

namespace mdebif {

/// Solve the initial value problem for the measure equation in its Stieltjes
/// integral form: between consecutive jump times of h the path follows
/// x' = f(lambda,x,t) + g(x,t)*density(t); at each jump tau the state resets
/// to x(tau+) = x(tau) + g(x(tau),tau)*size and integration restarts from the
/// right limit.  The result is left-continuous with the one-sided limits
/// recorded.  Throws DomainExitError when domain_check is on and the state
/// leaves omega_box (including a post-jump state outside the box).
RegulatedPath solve_ivp(const ProblemDef& p, double lambda, const Vec& x0,
                        const SolveSettings& s = {});

/// Defect oracle: max over the grid of
///   ||x(t) - x(0) - int_0^t f(lambda,x(s),s) ds - int_0^t g(x(s),s) dh(s)||
/// with both integrals evaluated by the Kurzweil-Stieltjes engine,
/// independently of how the path was produced.
double residual_sie(const ProblemDef& p, double lambda, const RegulatedPath& path,
                    const std::vector<double>& t_grid, double quad_tol = 1e-11);

/// Uniform grid of `count` points over [0, T], handy for residual checks.
std::vector<double> uniform_grid(double T, int count);

} // namespace mdebif

#endif
