#include "mdebif/bifurcation.hpp"

#include <cmath>
#include <memory>

namespace mdebif {

BranchProvider make_marching_branch(const ProblemDef& p, Vec x0_seed, double shoot_tol,
                                    int max_iter, SolveSettings s) {
    auto guess = std::make_shared<Vec>(std::move(x0_seed));
    return [&p, guess, shoot_tol, max_iter, s](double lambda) {
        ShootResult r = shoot(p, lambda, *guess, shoot_tol, max_iter, s);
        *guess = r.x0_star;
        return r;
    };
}

namespace {

int sign_of(const MonodromyReport& rep) {
    if (std::abs(rep.det_I_minus_M) <= rep.degeneracy_threshold()) return 0;
    return rep.det_I_minus_M > 0.0 ? 1 : -1;
}

const char* kUnverified[] = {
    "lambda-equicontinuity of the f increments (integral modulus bound in lambda) is "
    "analytic and not machine-checked",
    "lambda-equicontinuity of the state Jacobians of f and g is analytic and not "
    "machine-checked",
    "isolation of the branch fixed point is evidenced only by the determinant margin",
};

} // namespace

IndexResult index_sign(const ProblemDef& p, double lambda, const BranchProvider& branch) {
    if (!p.lambda_in_range(lambda))
        throw ValidationError("lambda=" + std::to_string(lambda) +
                              " outside the declared parameter interval");
    const ShootResult sol = branch(lambda);
    IndexResult out;
    out.report = sol.monodromy;
    out.det = out.report.det_I_minus_M;
    out.sign = sign_of(out.report);
    return out;
}

ScanReport scan(const ProblemDef& p, const BranchProvider& branch,
                const std::vector<double>& lambda_grid, double bisect_tol) {
    ScanReport rep;
    for (const char* s : kUnverified) rep.unverified_hypotheses.emplace_back(s);

    for (double lambda : lambda_grid) {
        ScanGridPoint pt;
        pt.lambda = lambda;
        try {
            const IndexResult ir = index_sign(p, lambda, branch);
            pt.det_I_minus_M = ir.det;
            pt.index_sign = ir.sign;
            pt.ok = true;
            if (ir.sign != 0) {
                rep.certificates.push_back({CertifiedRegion::Kind::NonBifurcation, lambda,
                                            std::abs(ir.det),
                                            ir.report.degeneracy_threshold(),
                                            "linearized periodic problem uniquely solvable; "
                                            "no bifurcation in a neighborhood"});
            }
        } catch (const Error& e) {
            pt.error = e.what();
        }
        rep.grid.push_back(pt);
    }

    bool any_nonzero = false;
    for (const auto& pt : rep.grid) any_nonzero = any_nonzero || (pt.ok && pt.index_sign != 0);
    rep.total_degeneracy = !rep.grid.empty() && !any_nonzero;

    // Brackets pair consecutive nonzero-sign grid points of opposite sign.
    // Degenerate (index 0) points in between are allowed -- they are never
    // endpoints -- but a failed point breaks the bracket since the branch is
    // unverified across it.
    std::vector<std::size_t> nz;
    for (std::size_t i = 0; i < rep.grid.size(); ++i) {
        if (!rep.grid[i].ok) {
            nz.push_back(static_cast<std::size_t>(-1));
            continue;
        }
        if (rep.grid[i].index_sign != 0) nz.push_back(i);
    }
    std::vector<std::array<std::size_t, 2>> brackets;
    for (std::size_t k = 0; k + 1 < nz.size(); ++k) {
        if (nz[k] == static_cast<std::size_t>(-1) || nz[k + 1] == static_cast<std::size_t>(-1))
            continue;
        if (rep.grid[nz[k]].index_sign != rep.grid[nz[k + 1]].index_sign)
            brackets.push_back({nz[k], nz[k + 1]});
    }

    for (const auto& br : brackets) {
        const ScanGridPoint& lo = rep.grid[br[0]];
        const ScanGridPoint& hi = rep.grid[br[1]];
        rep.sign_change_intervals.push_back({lo.lambda, hi.lambda});

        // Bisect det(I - M) inside the bracket; after the width tolerance is
        // met keep halving until the midpoint margin clears the degeneracy
        // threshold so a candidate certificate can be issued.
        double a = lo.lambda, b = hi.lambda;
        int sa = lo.index_sign;
        Candidate cand;
        double mid = 0.5 * (a + b);
        double margin = std::abs(lo.det_I_minus_M);
        double threshold = 0.0;
        for (int it = 0; it < 240; ++it) {
            mid = 0.5 * (a + b);
            const IndexResult ir = index_sign(p, mid, branch);
            ++cand.bisect_iterations;
            cand.det_history.push_back(std::abs(ir.det));
            cand.det_at_root = ir.det;
            margin = std::abs(ir.det);
            threshold = ir.report.degeneracy_threshold();
            if (ir.sign == 0) break;
            if (ir.sign == sa)
                a = mid;
            else
                b = mid;
            if (b - a <= bisect_tol && margin <= threshold) break;
        }
        cand.lambda0 = mid;
        rep.candidates.push_back(cand);
        rep.certificates.push_back({CertifiedRegion::Kind::CandidateNecessaryConditionMet,
                                    cand.lambda0, margin, threshold,
                                    "det(I - M) vanishes within tolerance: the homogeneous "
                                    "linearized periodic problem admits a nontrivial "
                                    "solution (necessary condition for bifurcation)"});
    }
    return rep;
}

FredholmResult fredholm_classify(const ProblemDef& p, double lambda0,
                                 const BranchProvider& branch) {
    const ShootResult sol = branch(lambda0);
    FredholmResult out;
    out.report = sol.monodromy;
    if (!out.report.degenerate()) {
        out.invertible = true;
        return out;
    }
    const Mat a = Mat::Identity(p.n, p.n) - out.report.M;
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const Vec sv = svd.singularValues();
    const double sigma_max = sv.size() ? sv[0] : 0.0;
    const double cut = std::max(p.n * 1e-15 * sigma_max,
                                std::sqrt(out.report.degeneracy_threshold()));
    int dim = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] <= cut) ++dim;
    out.kernel_dim = dim;
    out.kernel_basis = svd.matrixV().rightCols(dim);
    return out;
}

} // namespace mdebif
