#include "mdebif/rk45.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdebif/errors.hpp"

namespace mdebif {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Difference between the 5th- and 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Weights of the 5th-order continuous extension (Hairer's DOPRI5 contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// Relative error control with the trajectory magnitude as the floor: small
// solutions (e.g. finite-difference perturbations of an equilibrium) are then
// resolved to the same relative accuracy as O(1) ones, while components
// passing through zero stay controlled by the overall scale.
double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double tol) {
    const double scale =
        0.01 * std::max(y0.cwiseAbs().maxCoeff(), y1.cwiseAbs().maxCoeff()) +
        std::numeric_limits<double>::min();
    double sum = 0.0;
    for (int i = 0; i < err.size(); ++i) {
        const double sc = tol * (scale + std::max(std::abs(y0[i]), std::abs(y1[i])));
        const double r = err[i] / sc;
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(err.size()));
}

} // namespace

Vec rk45_integrate(const OdeRhs& f, double t0, double t1, Vec y, const RkOptions& opt,
                   PathBuilder* sink) {
    const double span = t1 - t0;
    if (span <= 0.0) throw SolverError("rk45 requires t1 > t0");
    const double hmax = opt.max_step > 0.0 ? std::min(opt.max_step, span) : span;
    const double hmin = 1e-14 * std::max(1.0, std::abs(t1));

    double t = t0;
    Vec k1 = f(t, y);
    double h = std::min(hmax, 0.01 * span);

    while (t < t1) {
        h = std::min(h, t1 - t);
        if (h < hmin)
            throw SolverError("step size collapse at t=" + std::to_string(t));

        const Vec k2 = f(t + c2 * h, y + h * (a21 * k1));
        const Vec k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const Vec k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec k6 =
            f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec k7 = f(t + h, ynew); // FSAL
        const Vec err =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        bool finite = ynew.allFinite() && err.allFinite();
        const double en = finite ? error_norm(err, y, ynew, opt.tol) : 2.0;
        if (finite && en <= 1.0) {
            if (sink) {
                // Midpoint from the continuous extension, then one extra
                // slope evaluation for the quintic Hermite span.
                const Vec dy = ynew - y;
                const Vec cont5 =
                    h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                const Vec r3 = h * k1 - dy;
                const Vec r4 = dy - h * k7 - r3;
                const double th = 0.5;
                const Vec ymid =
                    y + th * (dy + (1 - th) * (r3 + th * (r4 + (1 - th) * cont5)));
                const double tm = t + 0.5 * h;
                const Vec fmid = f(tm, ymid);
                sink->add_span_quintic(t, y, k1, tm, ymid, fmid, t + h, ynew, k7);
            }
            t += h;
            y = ynew;
            k1 = k7;
            if (opt.accept_hook && !opt.accept_hook(t, y)) return y;
            const double grow = en > 0.0 ? 0.9 * std::pow(en, -0.2) : 5.0;
            h = std::min(hmax, h * std::clamp(grow, 0.2, 5.0));
        } else {
            const double shrink = finite ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
            h *= shrink;
        }
    }
    return y;
}

} // namespace mdebif
