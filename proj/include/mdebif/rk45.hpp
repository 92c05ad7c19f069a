#ifndef MDEBIF_RK45_HPP
#define MDEBIF_RK45_HPP

#include <functional>

#include "mdebif/path.hpp"
#include "mdebif/types.hpp"

namespace mdebif {

/// Right-hand side of a first-order system y' = f(t, y).
using OdeRhs = std::function<Vec(double t, const Vec& y)>;

struct RkOptions {
    double tol = 1e-9;      // local error tolerance (mixed abs/rel)
    double max_step = 0.0;  // 0 means no cap beyond the interval length
    /// Called after every accepted step; return false to abort integration
    /// (used for domain monitoring).
    std::function<bool(double t, const Vec& y)> accept_hook;
};

/// Dormand-Prince 5(4) integration of y' = f over [t0, t1] (t1 > t0).
/// When `sink` is non-null, each accepted step appends one quintic Hermite
/// span built from value and slope at both endpoints and at the midpoint
/// (midpoint state from the 5th-order continuous extension).  Returns the
/// state at t1.  Throws SolverError on step-size collapse.
Vec rk45_integrate(const OdeRhs& f, double t0, double t1, Vec y0, const RkOptions& opt,
                   PathBuilder* sink = nullptr);

} // namespace mdebif

#endif
