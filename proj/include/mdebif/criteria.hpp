#ifndef MDEBIF_CRITERIA_HPP
#define MDEBIF_CRITERIA_HPP

#include "mdebif/problem.hpp"

namespace mdebif {

/// Outcome of the uniqueness criterion for y'' + q(t) y = 0 with T-periodic
/// boundary conditions.  Qminus/Qplus are the integrals of the negative and
/// positive parts of q over [0, T]; the verdict is unique_trivial iff both
/// are positive, Qminus < (1 - (pi/2) Qminus) * Qplus and Qminus < 2/pi,
/// each checked with a guard band `tol` (the hypotheses are open conditions).
struct CriterionVerdict {
    double Qminus = 0.0;
    double Qplus = 0.0;
    double lhs_factor = 0.0; // 1 - (pi/2) * Qminus
    double product = 0.0;    // lhs_factor * Qplus
    double two_over_pi = 0.0;
    bool positivity_ok = false;
    bool lhs_ok = false;
    bool bound_ok = false;
    bool unique_trivial = false;
};

/// q must be continuous on [0, T] and may depend on t only.  Sign changes are
/// located by dense sampling plus bisection before the quadrature so the
/// positive/negative parts are integrated on sign-constant pieces.
CriterionVerdict lomtatidze_check(const ExprPtr& q, double T, double tol = 1e-9);

/// Companion planar first-order system x1' = x2, x2' = q(t) x1 (trivial
/// integrator), used to cross-validate the criterion against the monodromy
/// route: unique_trivial must coincide with det(I - M) != 0.
ProblemDef second_order_to_system(const ExprPtr& q, double T);

} // namespace mdebif

#endif
