#ifndef MDEBIF_BIFURCATION_HPP
#define MDEBIF_BIFURCATION_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "mdebif/shooting.hpp"

namespace mdebif {

/// Supplies the periodic branch solution at a given parameter value.
using BranchProvider = std::function<ShootResult(double lambda)>;

/// Branch provider that shoots from `x0_seed`, reusing the last converged
/// initial state as the guess for subsequent parameter values.
BranchProvider make_marching_branch(const ProblemDef& p, Vec x0_seed, double shoot_tol = 1e-10,
                                    int max_iter = 50, SolveSettings s = {});

/// Local index surrogate: the sign of det(I - M(lambda)) along the branch,
/// or 0 when |det| falls below the scale-aware degeneracy threshold (the
/// index of a degenerate fixed point is undefined).
struct IndexResult {
    int sign = 0;
    double det = 0.0;
    MonodromyReport report;
};

IndexResult index_sign(const ProblemDef& p, double lambda, const BranchProvider& branch);

struct Candidate {
    double lambda0 = 0.0;
    double det_at_root = 0.0;
    int bisect_iterations = 0;
    std::vector<double> det_history; // |det| at successive bisection midpoints
};

struct CertifiedRegion {
    enum class Kind { NonBifurcation, CandidateNecessaryConditionMet };
    Kind kind;
    double lambda0;
    double margin;    // |det(I - M)| at lambda0
    double threshold; // degeneracy threshold the margin was compared against
    std::string note;
};

struct ScanGridPoint {
    double lambda = 0.0;
    double det_I_minus_M = 0.0;
    int index_sign = 0;
    bool ok = false;
    std::string error;
};

struct ScanReport {
    std::vector<ScanGridPoint> grid;
    std::vector<std::array<double, 2>> sign_change_intervals;
    std::vector<Candidate> candidates;
    std::vector<CertifiedRegion> certificates;
    bool total_degeneracy = false;
    /// Analytic hypotheses of the underlying theory that are not finitely
    /// checkable; listed so consumers of the report know what remains open.
    std::vector<std::string> unverified_hypotheses;
};

/// Evaluate the index along the branch over the grid, bracket sign changes,
/// bisect det(I - M(lambda)) to width `bisect_tol` inside each bracket, and
/// attach certificates: a candidate certificate where the necessary
/// degeneracy condition is met, a non-bifurcation certificate at every grid
/// point whose margin clears the threshold.  Failures at individual grid
/// points are recorded and the scan continues.
ScanReport scan(const ProblemDef& p, const BranchProvider& branch,
                const std::vector<double>& lambda_grid, double bisect_tol);

/// Fredholm alternative for the linearized periodic problem at lambda0:
/// either I - M is invertible (unique solvability for every forcing) or the
/// kernel of I - M is extracted by SVD; each basis column z0 expands to the
/// nontrivial periodic solution z(s) = Z(s) z0 via variational_solution().
struct FredholmResult {
    bool invertible = false;
    int kernel_dim = 0;
    Mat kernel_basis; // n x kernel_dim, empty when invertible
    MonodromyReport report;
};

FredholmResult fredholm_classify(const ProblemDef& p, double lambda0,
                                 const BranchProvider& branch);

} // namespace mdebif

#endif
