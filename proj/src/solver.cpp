#include "mdebif/solver.hpp"

#include <algorithm>
#include <cmath>

#include "mdebif/kstieltjes.hpp"
#include "mdebif/rk45.hpp"

namespace mdebif {

namespace {

OdeRhs flow_rhs(const ProblemDef& p, double lambda) {
    if (p.h.has_continuous_part()) {
        return [&p, lambda](double t, const Vec& y) {
            return Vec(p.eval_f(lambda, y, t) + p.h.density_at(t) * p.eval_g(y, t));
        };
    }
    return [&p, lambda](double t, const Vec& y) { return p.eval_f(lambda, y, t); };
}

// Refine the exit time inside the last accepted span by bisecting the box
// indicator between the last interior time and the violating time.
double refine_exit_time(const ProblemDef& p, const PathBuilder& b, double t_in, double t_out) {
    for (int i = 0; i < 60 && t_out - t_in > 1e-12 * (1.0 + std::abs(t_out)); ++i) {
        const double mid = 0.5 * (t_in + t_out);
        if (p.inside_omega(b.eval_last_span(mid)))
            t_in = mid;
        else
            t_out = mid;
    }
    return t_out;
}

} // namespace

RegulatedPath solve_ivp(const ProblemDef& p, double lambda, const Vec& x0,
                        const SolveSettings& s) {
    if (x0.size() != p.n) throw ValidationError("initial state has wrong dimension");
    if (!p.lambda_in_range(lambda))
        throw ValidationError("lambda=" + std::to_string(lambda) +
                              " outside the declared parameter interval");
    if (s.domain_check && !p.inside_omega(x0))
        throw ValidationError("initial state outside the domain box Omega");

    std::vector<double> stops = p.h.jump_times();
    stops.push_back(p.T);

    PathBuilder builder(p.n, 0.0, x0);
    const OdeRhs rhs = flow_rhs(p, lambda);

    RkOptions opt;
    opt.tol = s.rk_tol;
    opt.max_step = s.max_step;

    Vec y = x0;
    double t = 0.0;
    double last_inside = 0.0;
    if (s.domain_check) {
        opt.accept_hook = [&](double tt, const Vec& yy) {
            if (!p.inside_omega(yy)) {
                const double exit_t = refine_exit_time(p, builder, last_inside, tt);
                throw DomainExitError("state left the domain box Omega at t=" +
                                          std::to_string(exit_t),
                                      exit_t);
            }
            last_inside = tt;
            return true;
        };
    }

    std::size_t jump_idx = 0;
    for (double stop : stops) {
        y = rk45_integrate(rhs, t, stop, y, opt, &builder);
        t = stop;
        last_inside = t;
        if (jump_idx < p.h.jumps().size() && p.h.jumps()[jump_idx].time == stop) {
            const Jump& j = p.h.jumps()[jump_idx++];
            const Vec left = y;
            const Vec right = left + j.size * p.eval_g(left, j.time);
            builder.add_jump(j.time, left, right);
            if (s.domain_check && !p.inside_omega(right))
                throw DomainExitError("post-jump state outside the domain box Omega at t=" +
                                          std::to_string(j.time),
                                      j.time);
            y = right;
        }
    }
    return builder.finish(p.T, y);
}

double residual_sie(const ProblemDef& p, double lambda, const RegulatedPath& path,
                    const std::vector<double>& t_grid, double quad_tol) {
    if (path.dimension() != p.n) throw ValidationError("path dimension mismatch");
    std::vector<double> grid = t_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.empty()) return 0.0;
    if (grid.front() < 0.0 || grid.back() > p.T)
        throw ValidationError("residual grid leaves [0, T]");

    const Vec x0 = path(0.0);
    const Integrator lebesgue = Integrator::identity(p.T);

    std::vector<double> disc;
    for (const auto& j : path.jumps()) disc.push_back(j.time);

    VectorIntegrand f_phi;
    f_phi.dim = p.n;
    f_phi.discontinuities = disc;
    f_phi.eval = [&](double sx) { return p.eval_f(lambda, path(sx), sx); };
    f_phi.eval_right = [&](double sx) { return p.eval_f(lambda, path.right_limit(sx), sx); };

    VectorIntegrand g_phi;
    g_phi.dim = p.n;
    g_phi.discontinuities = disc;
    g_phi.eval = [&](double sx) { return p.eval_g(path(sx), sx); };
    g_phi.eval_right = [&](double sx) { return p.eval_g(path.right_limit(sx), sx); };

    double worst = 0.0;
    Vec acc = Vec::Zero(p.n);
    double prev = 0.0;
    for (double tg : grid) {
        acc += ks_integral(f_phi, lebesgue, prev, tg, quad_tol) +
               ks_integral(g_phi, p.h, prev, tg, quad_tol);
        prev = tg;
        worst = std::max(worst, norm1(path(tg) - x0 - acc));
    }
    return worst;
}

std::vector<double> uniform_grid(double T, int count) {
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = T * i / (count - 1);
    return g;
}

} // namespace mdebif
