#ifndef MDEBIF_SHOOTING_HPP
#define MDEBIF_SHOOTING_HPP

#include "mdebif/variational.hpp"

namespace mdebif {

/// Outcome of the periodic shooting iteration.
struct ShootResult {
    Vec x0_star;                 // periodic initial state
    RegulatedPath path;          // trajectory from x0_star
    double residual = 0.0;       // ||x(T) - x(0)||
    int iterations = 0;
    bool converged = false;
    MonodromyReport monodromy;   // evaluated along the converged path
};

/// Find a T-periodic solution by damped Newton iteration on
/// r(x0) = x(T; x0, lambda) - x0 with Jacobian M(x0) - I from the variational
/// equation.  The Newton step is halved (up to 20 times) until the residual
/// decreases.  Throws SingularJacobianError when det(M - I) is degenerate,
/// ConvergenceError when max_iter is exhausted or no damping step helps, and
/// propagates domain exits.
ShootResult shoot(const ProblemDef& p, double lambda, const Vec& x0_guess, double tol = 1e-10,
                  int max_iter = 50, const SolveSettings& s = {});

/// Exploration helper: shoot from the cell centers of a `per_axis`^n grid
/// over the domain box, in parallel, and return the distinct periodic orbits
/// found (deduplicated by initial state, sorted lexicographically so the
/// output is deterministic).  Individual failures are counted, not raised.
struct MultiStartReport {
    std::vector<ShootResult> orbits;
    int attempts = 0;
    int failures = 0;
};

MultiStartReport multi_start_shoot(const ProblemDef& p, double lambda, int per_axis,
                                   double tol = 1e-10, int max_iter = 50,
                                   const SolveSettings& s = {}, double dedup_tol = 1e-6);

} // namespace mdebif

#endif
