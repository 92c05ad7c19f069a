#include "mdebif/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "mdebif/solver.hpp"

namespace mdebif {

ShootResult shoot(const ProblemDef& p, double lambda, const Vec& x0_guess, double tol,
                  int max_iter, const SolveSettings& s) {
    if (x0_guess.size() != p.n) throw ValidationError("shooting guess has wrong dimension");
    if (!p.inside_omega(x0_guess))
        throw ValidationError("shooting guess outside the domain box Omega");

    // Newton iterates may transiently leave Omega; the domain constraint is
    // enforced on the converged orbit below.
    SolveSettings si = s;
    si.domain_check = false;

    Vec x = x0_guess;
    RegulatedPath path = solve_ivp(p, lambda, x, si);
    Vec r = path(p.T) - x;
    double rn = norm1(r);

    int it = 0;
    while (rn > tol) {
        if (it >= max_iter)
            throw ConvergenceError("shooting failed to converge within " +
                                   std::to_string(max_iter) + " iterations (residual " +
                                   std::to_string(rn) + ")");
        ++it;

        const MonodromyReport rep = monodromy(p, lambda, path, si);
        const Mat jac = rep.M - Mat::Identity(p.n, p.n);
        if (rep.degenerate())
            throw SingularJacobianError(
                "Newton Jacobian M - I is numerically singular: degenerate periodic problem "
                "(|det(I - M)| = " +
                std::to_string(std::abs(rep.det_I_minus_M)) + ")");
        const Vec step = jac.fullPivLu().solve(-r);

        // Damping: halve the step until the residual decreases.  Trials whose
        // trajectory blows up or hits an expression domain error count as
        // failures and shrink the step further.
        bool improved = false;
        double alpha = 1.0;
        for (int k = 0; k < 20 && !improved; ++k, alpha *= 0.5) {
            const Vec xt = x + alpha * step;
            try {
                RegulatedPath pt = solve_ivp(p, lambda, xt, si);
                Vec rt = pt(p.T) - xt;
                const double rtn = norm1(rt);
                if (std::isfinite(rtn) && rtn < rn) {
                    x = xt;
                    path = std::move(pt);
                    r = std::move(rt);
                    rn = rtn;
                    improved = true;
                }
            } catch (const SolverError&) {
                continue;
            } catch (const EvalError&) {
                continue;
            }
        }
        if (!improved)
            throw ConvergenceError("shooting stalled: no damped Newton step reduced the "
                                   "residual (residual " +
                                   std::to_string(rn) + ")");
    }

    // Polish: keep stepping while the residual strictly improves.  At a
    // degenerate root r is quadratic in the offset, so the residual test
    // alone leaves the root under-resolved by sqrt(tol); the extra steps
    // halve the offset until the Jacobian itself degenerates or solver
    // noise takes over.
    for (int extra = 0; extra < 60 && rn > 0.0; ++extra) {
        const MonodromyReport rep = monodromy(p, lambda, path, si);
        if (rep.degenerate()) break;
        const Vec step = (rep.M - Mat::Identity(p.n, p.n)).fullPivLu().solve(-r);
        bool improved = false;
        double alpha = 1.0;
        for (int k = 0; k < 4 && !improved; ++k, alpha *= 0.5) {
            const Vec xt = x + alpha * step;
            try {
                RegulatedPath pt = solve_ivp(p, lambda, xt, si);
                Vec rt = pt(p.T) - xt;
                const double rtn = norm1(rt);
                // Polish only while the gain is substantial; near the noise
                // floor marginal improvements would inflate the iteration
                // count without moving the root.
                if (std::isfinite(rtn) && rtn < 0.5 * rn) {
                    x = xt;
                    path = std::move(pt);
                    r = std::move(rt);
                    rn = rtn;
                    improved = true;
                    ++it;
                }
            } catch (const SolverError&) {
                continue;
            } catch (const EvalError&) {
                continue;
            }
        }
        if (!improved) break;
    }

    // Re-solve with the caller's domain setting: the converged orbit itself
    // must respect Omega when checking is requested.  Newton may have left
    // the basin of the seeded orbit and landed on a periodic point outside
    // the box; that is a domain exit, not a validation problem.
    if (s.domain_check && !p.inside_omega(x))
        throw DomainExitError(
            "shooting converged to a periodic state outside the domain box Omega (seed "
            "another initial guess)",
            0.0);
    path = solve_ivp(p, lambda, x, s);
    r = path(p.T) - x;

    ShootResult out;
    out.x0_star = x;
    out.residual = norm1(r);
    out.iterations = it;
    out.converged = true;
    out.monodromy = monodromy(p, lambda, path, si);
    out.path = std::move(path);
    return out;
}

MultiStartReport multi_start_shoot(const ProblemDef& p, double lambda, int per_axis,
                                   double tol, int max_iter, const SolveSettings& s,
                                   double dedup_tol) {
    if (per_axis < 1) throw ValidationError("multi-start grid needs at least one point per axis");
    long total = 1;
    for (int i = 0; i < p.n; ++i) {
        total *= per_axis;
        if (total > 100000) throw ValidationError("multi-start grid too large");
    }

    // Cell centers of the per_axis^n grid over the open box.
    std::vector<Vec> seeds;
    seeds.reserve(static_cast<std::size_t>(total));
    std::vector<int> idx(static_cast<std::size_t>(p.n), 0);
    for (long k = 0; k < total; ++k) {
        Vec x0(p.n);
        for (int i = 0; i < p.n; ++i) {
            const auto& b = p.omega_box[static_cast<std::size_t>(i)];
            x0[i] = b[0] + (b[1] - b[0]) * (idx[static_cast<std::size_t>(i)] + 0.5) / per_axis;
        }
        seeds.push_back(std::move(x0));
        for (int i = 0; i < p.n; ++i) {
            if (++idx[static_cast<std::size_t>(i)] < per_axis) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }

    // Guesses run in parallel batches; shoot() has no shared mutable state.
    MultiStartReport rep;
    rep.attempts = static_cast<int>(seeds.size());
    std::vector<ShootResult> found;
    const unsigned batch = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t base = 0; base < seeds.size(); base += batch) {
        std::vector<std::future<ShootResult>> futures;
        for (std::size_t i = base; i < std::min(seeds.size(), base + batch); ++i)
            futures.push_back(std::async(std::launch::async, [&, i] {
                return shoot(p, lambda, seeds[i], tol, max_iter, s);
            }));
        for (auto& f : futures) {
            try {
                found.push_back(f.get());
            } catch (const Error&) {
                ++rep.failures;
            }
        }
    }

    std::sort(found.begin(), found.end(), [](const ShootResult& a, const ShootResult& b) {
        for (int i = 0; i < a.x0_star.size(); ++i)
            if (a.x0_star[i] != b.x0_star[i]) return a.x0_star[i] < b.x0_star[i];
        return false;
    });
    for (auto& r : found) {
        const bool dup =
            !rep.orbits.empty() &&
            std::any_of(rep.orbits.begin(), rep.orbits.end(), [&](const ShootResult& o) {
                return norm1(o.x0_star - r.x0_star) <=
                       dedup_tol * (1.0 + norm1(o.x0_star));
            });
        if (!dup) rep.orbits.push_back(std::move(r));
    }
    return rep;
}

} // namespace mdebif
