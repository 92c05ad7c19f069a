#include "mdebif/kstieltjes.hpp"

#include <algorithm>
#include <cmath>

#include "mdebif/quadrature.hpp"

namespace mdebif {

namespace {

// Breakpoints of the absolutely continuous part on [a, b]: listed
// discontinuities of phi plus the jump times of h.
std::vector<double> panel_points(const Integrator& h, const std::vector<double>& phi_disc,
                                 double a, double b) {
    std::vector<double> pts{a, b};
    for (double d : phi_disc)
        if (d > a && d < b) pts.push_back(d);
    for (const Jump& j : h.jumps())
        if (j.time > a && j.time < b) pts.push_back(j.time);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

bool is_listed(double t, const std::vector<double>& disc) {
    return std::find(disc.begin(), disc.end(), t) != disc.end();
}

// Integral of phi * density over one panel whose left end may sit exactly on
// a discontinuity of phi, in which case the right limit is used there.
double panel_integral(const Integrand& phi, const Integrator& h, double p, double q,
                      double tol) {
    const bool left_is_disc = is_listed(p, phi.discontinuities) && phi.eval_right;
    auto f = [&](double s) {
        const double v =
            (left_is_disc && s == p) ? phi.eval_right(s) : phi.eval(s);
        return v * h.density_at(s);
    };
    return integrate(f, p, q, tol);
}

} // namespace

double ks_integral(const Integrand& phi, const Integrator& h, double a, double b, double tol) {
    if (a == b) return 0.0;
    if (a > b) return -ks_integral(phi, h, b, a, tol);

    double total = 0.0;
    if (h.has_continuous_part()) {
        const std::vector<double> pts = panel_points(h, phi.discontinuities, a, b);
        const double piece_tol = tol / static_cast<double>(pts.size() - 1);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            total += panel_integral(phi, h, pts[i], pts[i + 1], piece_tol);
    }
    // Jump at a included, jump at b excluded.
    for (const Jump& j : h.jumps())
        if (j.time >= a && j.time < b) total += phi.eval(j.time) * j.size;
    return total;
}

Vec ks_integral(const VectorIntegrand& phi, const Integrator& h, double a, double b,
                double tol) {
    Vec out(phi.dim);
    for (int i = 0; i < phi.dim; ++i) {
        Integrand comp;
        comp.eval = [&phi, i](double s) { return phi.eval(s)[i]; };
        comp.discontinuities = phi.discontinuities;
        if (phi.eval_right)
            comp.eval_right = [&phi, i](double s) { return phi.eval_right(s)[i]; };
        out[i] = ks_integral(comp, h, a, b, tol);
    }
    return out;
}

Mat ks_integral(const MatrixIntegrand& phi, const Integrator& h, double a, double b,
                double tol) {
    Mat out(phi.rows, phi.cols);
    for (int i = 0; i < phi.rows; ++i)
        for (int j = 0; j < phi.cols; ++j) {
            Integrand comp;
            comp.eval = [&phi, i, j](double s) { return phi.eval(s)(i, j); };
            comp.discontinuities = phi.discontinuities;
            if (phi.eval_right)
                comp.eval_right = [&phi, i, j](double s) { return phi.eval_right(s)(i, j); };
            out(i, j) = ks_integral(comp, h, a, b, tol);
        }
    return out;
}

RegulatedPath indefinite(const Integrand& phi, const Integrator& h, double tol) {
    const double T = h.period();
    const std::vector<double> pts = panel_points(h, phi.discontinuities, 0.0, T);

    PathBuilder builder(1, 0.0, Vec::Zero(1));
    double acc = 0.0; // running value of H from the right of the last jump

    auto deriv_at = [&](double s, bool right_side) {
        if (!h.has_continuous_part()) return 0.0;
        const double v = (right_side && phi.eval_right) ? phi.eval_right(s) : phi.eval(s);
        return v * h.density_at(s);
    };

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double p = pts[i], q = pts[i + 1];
        // Resolve the smooth increment on [p, q] on a fixed subgrid; phi is
        // continuous inside the panel so cubic Hermite pieces suffice.
        // TODO: adapt the span count to the integrand instead of the fixed
        // subgrid.
        const int panels =
            h.has_continuous_part()
                ? std::max(16, static_cast<int>(std::ceil((q - p) / T * 256.0)))
                : 1;
        double prev_t = p;
        double prev_v = acc;
        double prev_d = deriv_at(p, is_listed(p, phi.discontinuities));
        for (int k = 1; k <= panels; ++k) {
            const double t = (k == panels) ? q : p + (q - p) * k / panels;
            const double inc = h.has_continuous_part()
                                   ? panel_integral(phi, h, prev_t, t, tol / panels)
                                   : 0.0;
            const double v = prev_v + inc;
            const double d = deriv_at(t, false);
            builder.add_span_cubic(prev_t, Vec::Constant(1, prev_v), Vec::Constant(1, prev_d),
                                   t, Vec::Constant(1, v), Vec::Constant(1, d));
            prev_t = t;
            prev_v = v;
            prev_d = d;
        }
        acc = prev_v;
        // The panel may end at a jump of h (never at q == T: jumps are interior).
        for (const Jump& j : h.jumps()) {
            if (j.time == q) {
                const double delta = phi.eval(q) * j.size;
                builder.add_jump(q, Vec::Constant(1, acc), Vec::Constant(1, acc + delta));
                acc += delta;
                break;
            }
        }
    }
    return builder.finish(T, Vec::Constant(1, acc));
}

} // namespace mdebif
