#include "mdebif/problem.hpp"

#include <cmath>

namespace mdebif {

ProblemDef::ProblemDef(int n_, double T_, std::vector<ExprPtr> f_, std::vector<ExprPtr> g_,
                       Integrator h_, std::array<double, 2> lambda_interval_,
                       std::vector<std::array<double, 2>> omega_box_, std::string description_)
    : n(n_), T(T_), f(std::move(f_)), g(std::move(g_)), h(std::move(h_)),
      lambda_interval(lambda_interval_), omega_box(std::move(omega_box_)),
      description(std::move(description_)) {
    if (n < 1) throw ValidationError("dimension must be at least 1");
    if (!(T > 0.0)) throw ValidationError("period must be positive");
    if (static_cast<int>(f.size()) != n)
        throw ValidationError("expected " + std::to_string(n) + " components for f");
    if (static_cast<int>(g.size()) != n)
        throw ValidationError("expected " + std::to_string(n) + " components for g");
    for (int i = 0; i < n; ++i) {
        if (!f[i] || !g[i]) throw ValidationError("missing component expression");
        if (uses_lambda(g[i]))
            throw ValidationError("g" + std::to_string(i + 1) +
                                  " must not reference lambda (signature g(x,t))");
    }
    if (h.period() != T)
        throw ValidationError("integrator period does not match the problem period");
    if (!(lambda_interval[0] < lambda_interval[1]))
        throw ValidationError("lambda interval is empty");
    if (static_cast<int>(omega_box.size()) != n)
        throw ValidationError("omega box must have one bound pair per dimension");
    for (const auto& b : omega_box)
        if (!(b[0] < b[1])) throw ValidationError("omega box is empty");
}

bool ProblemDef::lambda_in_range(double lambda) const {
    return lambda >= lambda_interval[0] && lambda <= lambda_interval[1];
}

bool ProblemDef::inside_omega(const Vec& x) const {
    for (int i = 0; i < n; ++i)
        if (!(x[i] > omega_box[i][0] && x[i] < omega_box[i][1])) return false;
    return true;
}

Vec ProblemDef::eval_f(double lambda, const Vec& x, double t) const {
    EvalContext ctx{t, lambda, {x.data(), static_cast<std::size_t>(x.size())}};
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = evaluate(f[i], ctx);
    return out;
}

Vec ProblemDef::eval_g(const Vec& x, double t) const {
    EvalContext ctx{t, 0.0, {x.data(), static_cast<std::size_t>(x.size())}};
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = evaluate(g[i], ctx);
    return out;
}

} // namespace mdebif
