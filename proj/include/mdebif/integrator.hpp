#ifndef MDEBIF_INTEGRATOR_HPP
#define MDEBIF_INTEGRATOR_HPP

#include <vector>

#include "mdebif/expr.hpp"

namespace mdebif {

/// One jump of the integrator: h gains `size` immediately after `time`.
struct Jump {
    double time;
    double size;
};

/// The integrator h of the measure equation: an absolutely continuous part
/// described by a density expression in t plus finitely many interior jumps.
/// Normalized to h(0) = 0 and left-continuous, so h(t) = int_0^t density +
/// sum of sizes over jumps before t, and the one-sided jump at tau_j is
/// exactly size_j.
class Integrator {
public:
    /// Validates: jump times strictly increasing and strictly inside (0, T),
    /// no zero sizes, density depends on t only.
    Integrator(ExprPtr density, std::vector<Jump> jumps, double period);

    /// h with no jumps and zero density.
    static Integrator zero(double period);
    /// h(t) = t (density one, no jumps); reduces the KS integral to the
    /// Henstock-Kurzweil one.
    static Integrator identity(double period);

    /// Left-continuous evaluation of the reconstructed h; t < 0 yields 0.
    double operator()(double t) const;

    /// Total variation over [0, T]: the density is integrated in absolute
    /// value (split at its sign changes) plus the sum of |size_j|.
    double variation(double tol = 1e-10) const;

    double density_at(double t) const;
    bool has_continuous_part() const { return has_continuous_part_; }

    const std::vector<Jump>& jumps() const { return jumps_; }
    std::vector<double> jump_times() const;
    double period() const { return period_; }
    const ExprPtr& density() const { return density_; }

private:
    ExprPtr density_;
    std::vector<Jump> jumps_;
    double period_;
    bool has_continuous_part_;
};

} // namespace mdebif

#endif
