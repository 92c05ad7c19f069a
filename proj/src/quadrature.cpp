#include "mdebif/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "mdebif/errors.hpp"

namespace mdebif {

namespace {

double checked(const std::function<double(double)>& f, double x) {
    const double v = f(x);
    if (std::isnan(v)) throw QuadratureError("NaN from integrand at t=" + std::to_string(x));
    return v;
}

double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

double adapt(const std::function<double(double)>& f, double a, double b, double fa, double fm,
             double fb, double whole, double tol, int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = checked(f, lm);
    const double frm = checked(f, rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || (b - a) < 1e-15 * (1.0 + std::abs(a)))
        return left + right + delta / 15.0;
    if (depth >= max_depth)
        throw QuadratureError("adaptive quadrature failed to converge on [" +
                              std::to_string(a) + ", " + std::to_string(b) + "]");
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_depth) {
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, abs_tol, max_depth);
    const double fa = checked(f, a);
    const double m = 0.5 * (a + b);
    const double fm = checked(f, m);
    const double fb = checked(f, b);
    const double whole = simpson(fa, fm, fb, b - a);
    return adapt(f, a, b, fa, fm, fb, whole, abs_tol, 0, max_depth);
}

double integrate_split(const std::function<double(double)>& f, double a, double b,
                       double abs_tol, std::span<const double> breakpoints, int max_depth) {
    if (a == b) return 0.0;
    if (a > b) return -integrate_split(f, b, a, abs_tol, breakpoints, max_depth);
    std::vector<double> pts{a};
    for (double p : breakpoints)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double piece_tol = abs_tol / static_cast<double>(pts.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += integrate(f, pts[i], pts[i + 1], piece_tol, max_depth);
    return total;
}

std::vector<double> find_sign_changes(const std::function<double(double)>& f, double a,
                                      double b, int samples, double bisect_tol) {
    std::vector<double> roots;
    double prev_t = a;
    double prev_v = f(a);
    for (int i = 1; i <= samples; ++i) {
        const double t = a + (b - a) * static_cast<double>(i) / samples;
        const double v = f(t);
        if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0)) {
            double lo = prev_t, hi = t, flo = prev_v;
            while (hi - lo > bisect_tol) {
                const double mid = 0.5 * (lo + hi);
                const double fmid = f(mid);
                if (fmid == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((flo < 0.0) == (fmid < 0.0)) {
                    lo = mid;
                    flo = fmid;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        } else if (v == 0.0 && prev_v != 0.0) {
            roots.push_back(t);
        }
        prev_t = t;
        prev_v = v;
    }
    return roots;
}

} // namespace mdebif
