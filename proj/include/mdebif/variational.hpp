#ifndef MDEBIF_VARIATIONAL_HPP
#define MDEBIF_VARIATIONAL_HPP

#include <complex>
#include <vector>

#include "mdebif/path.hpp"
#include "mdebif/problem.hpp"

namespace mdebif {

/// Symbolic state Jacobians: entry (i, j) is the partial derivative of
/// component i with respect to xj.
struct JacobianPair {
    std::vector<std::vector<ExprPtr>> fprime; // n x n
    std::vector<std::vector<ExprPtr>> gprime; // n x n

    Mat eval_fprime(const ProblemDef& p, double lambda, const Vec& x, double t) const;
    Mat eval_gprime(const ProblemDef& p, const Vec& x, double t) const;
};

JacobianPair jacobians(const ProblemDef& p);

/// Fundamental matrix of the linearized equation along a reference path,
/// propagated to T with Z(0) = I, including one jump factor
/// I + g'_x(x(tau),tau) * size per jump of h.  The homogeneous periodic
/// linearized problem has a nontrivial solution iff det(I - M) vanishes.
struct MonodromyReport {
    double lambda = 0.0;
    Mat M;
    double det_I_minus_M = 0.0;
    std::vector<std::complex<double>> eigenvalues;
    std::vector<std::pair<double, Mat>> jump_factors; // (tau, I + g'_x * size)

    /// Scale-aware degeneracy threshold 1e-8 * (1 + ||M||^n).
    double degeneracy_threshold() const;
    bool degenerate() const { return std::abs(det_I_minus_M) <= degeneracy_threshold(); }
};

/// Throws SingularJumpError when a jump factor is not invertible
/// (|det| <= 1e-12), since Z(T) then no longer determines the solution space.
MonodromyReport monodromy(const ProblemDef& p, double lambda, const RegulatedPath& ref,
                          const SolveSettings& s = {});

/// Solution z(t) = Z(t) z0 of the linearized equation along `ref`, as a dense
/// path (used to expand kernel vectors into nontrivial periodic solutions).
RegulatedPath variational_solution(const ProblemDef& p, double lambda,
                                   const RegulatedPath& ref, const Vec& z0,
                                   const SolveSettings& s = {});

/// Finite-difference Poincare-map Jacobian: column j is the centered
/// difference of x(T; x0 +- eps e_j) / (2 eps).  Independent oracle for
/// monodromy().
Mat monodromy_fd_check(const ProblemDef& p, double lambda, const Vec& x0, double eps,
                       const SolveSettings& s = {});

} // namespace mdebif

#endif
