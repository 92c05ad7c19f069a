#include "mdebif/criteria.hpp"

#include <cmath>
#include <numbers>

#include "mdebif/quadrature.hpp"

namespace mdebif {

CriterionVerdict lomtatidze_check(const ExprPtr& q, double T, double tol) {
    if (!q) throw ValidationError("criterion expression missing");
    if (uses_state(q) || uses_lambda(q))
        throw ValidationError("criterion coefficient q may depend on t only");
    if (!(T > 0.0)) throw ValidationError("criterion period must be positive");

    auto qv = [&q](double t) {
        EvalContext ctx;
        ctx.t = t;
        return evaluate(q, ctx);
    };

    const std::vector<double> crossings = find_sign_changes(qv, 0.0, T, 4096, 1e-12);
    std::vector<double> pts{0.0};
    pts.insert(pts.end(), crossings.begin(), crossings.end());
    pts.push_back(T);

    const double piece_tol = 0.1 * tol / static_cast<double>(pts.size() - 1);
    double qplus = 0.0, qminus = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double piece = integrate(qv, pts[i], pts[i + 1], piece_tol);
        if (piece >= 0.0)
            qplus += piece;
        else
            qminus -= piece;
    }

    CriterionVerdict v;
    v.Qminus = qminus;
    v.Qplus = qplus;
    v.lhs_factor = 1.0 - std::numbers::pi / 2.0 * qminus;
    v.product = v.lhs_factor * qplus;
    v.two_over_pi = 2.0 / std::numbers::pi;
    v.positivity_ok = qminus > tol && qplus > tol;
    v.lhs_ok = qminus < v.product - tol;
    v.bound_ok = qminus < v.two_over_pi - tol;
    v.unique_trivial = v.positivity_ok && v.lhs_ok && v.bound_ok;
    return v;
}

ProblemDef second_order_to_system(const ExprPtr& q, double T) {
    if (uses_state(q) || uses_lambda(q))
        throw ValidationError("criterion coefficient q may depend on t only");
    std::vector<ExprPtr> f = {
        make_variable(VarRef::state(2)),
        make_binary(BinaryOp::Mul, q, make_variable(VarRef::state(1))),
    };
    std::vector<ExprPtr> g = {make_constant(0.0), make_constant(0.0)};
    const double big = 1e9;
    return ProblemDef(2, T, std::move(f), std::move(g), Integrator::zero(T), {-1.0, 1.0},
                      {{{-big, big}}, {{-big, big}}},
                      "companion planar system x1' = x2, x2' = q(t) x1");
}

} // namespace mdebif
