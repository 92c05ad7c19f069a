#include "mdebif/variational.hpp"

#include <cmath>

#include "mdebif/rk45.hpp"
#include "mdebif/solver.hpp"

namespace mdebif {

namespace {

Mat eval_matrix(const std::vector<std::vector<ExprPtr>>& m, const EvalContext& ctx, int n) {
    Mat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = evaluate(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], ctx);
    return out;
}

} // namespace

Mat JacobianPair::eval_fprime(const ProblemDef& p, double lambda, const Vec& x,
                              double t) const {
    EvalContext ctx{t, lambda, {x.data(), static_cast<std::size_t>(x.size())}};
    return eval_matrix(fprime, ctx, p.n);
}

Mat JacobianPair::eval_gprime(const ProblemDef& p, const Vec& x, double t) const {
    EvalContext ctx{t, 0.0, {x.data(), static_cast<std::size_t>(x.size())}};
    return eval_matrix(gprime, ctx, p.n);
}

JacobianPair jacobians(const ProblemDef& p) {
    JacobianPair jp;
    jp.fprime.resize(static_cast<std::size_t>(p.n));
    jp.gprime.resize(static_cast<std::size_t>(p.n));
    for (int i = 0; i < p.n; ++i) {
        for (int j = 1; j <= p.n; ++j) {
            jp.fprime[static_cast<std::size_t>(i)].push_back(
                differentiate(p.f[static_cast<std::size_t>(i)], VarRef::state(j)));
            jp.gprime[static_cast<std::size_t>(i)].push_back(
                differentiate(p.g[static_cast<std::size_t>(i)], VarRef::state(j)));
        }
    }
    return jp;
}

namespace {

// Coefficient matrix of the smooth part of the linearized flow:
// A(t) = f'_x(lambda, x(t), t) + g'_x(x(t), t) * density(t).
struct LinearizedFlow {
    const ProblemDef& p;
    const JacobianPair& jac;
    const RegulatedPath& ref;
    double lambda;

    Mat coefficient(double t) const {
        const Vec x = ref.right_limit(t);
        Mat a = jac.eval_fprime(p, lambda, x, t);
        if (p.h.has_continuous_part()) a += p.h.density_at(t) * jac.eval_gprime(p, x, t);
        return a;
    }
};

Mat unflatten(const Vec& v, int n, int cols) {
    return Eigen::Map<const Mat>(v.data(), n, cols);
}

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

// Propagate the columns of Z0 through the linearized equation, applying the
// jump factors, optionally recording a dense path (for vector solutions).
Mat propagate_linearized(const LinearizedFlow& lf, Mat z, const SolveSettings& s,
                         PathBuilder* sink,
                         std::vector<std::pair<double, Mat>>* factors) {
    const ProblemDef& p = lf.p;
    const int n = p.n;
    const int cols = static_cast<int>(z.cols());

    OdeRhs rhs = [&lf, n, cols](double t, const Vec& y) {
        const Mat zc = unflatten(y, n, cols);
        return flatten(lf.coefficient(t) * zc);
    };

    RkOptions opt;
    opt.tol = s.rk_tol;
    opt.max_step = s.max_step;

    std::vector<double> stops = p.h.jump_times();
    stops.push_back(p.T);

    Vec y = flatten(z);
    double t = 0.0;
    std::size_t jump_idx = 0;
    for (double stop : stops) {
        y = rk45_integrate(rhs, t, stop, y, opt, sink);
        t = stop;
        if (jump_idx < p.h.jumps().size() && p.h.jumps()[jump_idx].time == stop) {
            const Jump& j = p.h.jumps()[jump_idx++];
            const Vec xleft = lf.ref(j.time); // jump factor uses the left value
            const Mat factor = Mat::Identity(n, n) + j.size * lf.jac.eval_gprime(p, xleft, j.time);
            if (std::abs(factor.determinant()) <= 1e-12)
                throw SingularJumpError("jump factor at t=" + std::to_string(j.time) +
                                        " is not invertible");
            if (factors) factors->emplace_back(j.time, factor);
            const Mat left = unflatten(y, n, cols);
            const Mat right = factor * left;
            if (sink) sink->add_jump(j.time, flatten(left), flatten(right));
            y = flatten(right);
        }
    }
    z = unflatten(y, n, cols);
    return z;
}

} // namespace

double MonodromyReport::degeneracy_threshold() const {
    const int n = static_cast<int>(M.rows());
    return 1e-8 * (1.0 + std::pow(mat_norm(M), n));
}

MonodromyReport monodromy(const ProblemDef& p, double lambda, const RegulatedPath& ref,
                          const SolveSettings& s) {
    if (ref.dimension() != p.n) throw ValidationError("reference path dimension mismatch");
    const JacobianPair jac = jacobians(p);
    const LinearizedFlow lf{p, jac, ref, lambda};

    MonodromyReport rep;
    rep.lambda = lambda;
    rep.M = propagate_linearized(lf, Mat::Identity(p.n, p.n), s, nullptr, &rep.jump_factors);
    rep.det_I_minus_M = (Mat::Identity(p.n, p.n) - rep.M).determinant();

    Eigen::EigenSolver<Mat> es(rep.M);
    for (int i = 0; i < p.n; ++i) rep.eigenvalues.push_back(es.eigenvalues()[i]);
    return rep;
}

RegulatedPath variational_solution(const ProblemDef& p, double lambda,
                                   const RegulatedPath& ref, const Vec& z0,
                                   const SolveSettings& s) {
    const JacobianPair jac = jacobians(p);
    const LinearizedFlow lf{p, jac, ref, lambda};
    PathBuilder builder(p.n, 0.0, z0);
    Mat z(p.n, 1);
    z.col(0) = z0;
    const Mat zT = propagate_linearized(lf, z, s, &builder, nullptr);
    return builder.finish(p.T, zT.col(0));
}

Mat monodromy_fd_check(const ProblemDef& p, double lambda, const Vec& x0, double eps,
                       const SolveSettings& s) {
    Mat jac(p.n, p.n);
    for (int j = 0; j < p.n; ++j) {
        Vec xp = x0, xm = x0;
        xp[j] += eps;
        xm[j] -= eps;
        const Vec yp = solve_ivp(p, lambda, xp, s)(p.T);
        const Vec ym = solve_ivp(p, lambda, xm, s)(p.T);
        jac.col(j) = (yp - ym) / (2.0 * eps);
    }
    return jac;
}

} // namespace mdebif
