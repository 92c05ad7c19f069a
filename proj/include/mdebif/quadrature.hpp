#ifndef MDEBIF_QUADRATURE_HPP
#define MDEBIF_QUADRATURE_HPP

#include <functional>
#include <span>
#include <vector>

namespace mdebif {

/// Adaptive Simpson quadrature with Richardson extrapolation.  The error
/// estimate assumes the integrand is smooth within [a, b]; callers must split
/// at known discontinuities beforehand (see integrate_split).  Throws
/// QuadratureError after max_depth unresolved bisections or on NaN integrand
/// values.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_depth = 60);

/// Same, but the interval is first split at the given breakpoints (only those
/// strictly inside (a, b) matter).  Breakpoints need not be sorted.
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       double abs_tol, std::span<const double> breakpoints,
                       int max_depth = 60);

/// Locate the sign changes of f on [a, b] by sampling `samples` equal panels
/// and bisecting each bracketing panel down to width `bisect_tol`.  Returns
/// the crossing abscissae in increasing order.
std::vector<double> find_sign_changes(const std::function<double(double)>& f, double a,
                                      double b, int samples = 4096,
                                      double bisect_tol = 1e-12);

} // namespace mdebif

#endif
