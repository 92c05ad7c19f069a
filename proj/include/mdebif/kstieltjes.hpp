#ifndef MDEBIF_KSTIELTJES_HPP
#define MDEBIF_KSTIELTJES_HPP

#include <functional>
#include <vector>

#include "mdebif/integrator.hpp"
#include "mdebif/path.hpp"
#include "mdebif/types.hpp"

namespace mdebif {

/// A regulated integrand: one-sided limits exist at the listed discontinuity
/// times and the function is continuous elsewhere.  `eval` returns the value
/// at the point (the left value for left-continuous integrands); the optional
/// `eval_right` supplies right limits so quadrature panels that start at a
/// listed discontinuity see the correct one-sided values.
struct Integrand {
    std::function<double(double)> eval;
    std::vector<double> discontinuities;
    std::function<double(double)> eval_right; // defaults to eval

    Integrand() = default;
    Integrand(std::function<double(double)> f, std::vector<double> disc = {},
              std::function<double(double)> f_right = nullptr)
        : eval(std::move(f)), discontinuities(std::move(disc)),
          eval_right(std::move(f_right)) {}
};

/// Vector-valued integrand, evaluated pointwise per component.
struct VectorIntegrand {
    int dim = 0;
    std::function<Vec(double)> eval;
    std::vector<double> discontinuities;
    std::function<Vec(double)> eval_right; // defaults to eval
};

/// Matrix-valued integrand (entries integrated pointwise).
struct MatrixIntegrand {
    int rows = 0, cols = 0;
    std::function<Mat(double)> eval;
    std::vector<double> discontinuities;
    std::function<Mat(double)> eval_right; // defaults to eval
};

/// Kurzweil-Stieltjes integral of phi against h over [a, b]:
///   int_a^b phi * density dt  +  sum over jumps with a <= tau < b of
///   phi(tau) * size(tau),
/// i.e. a jump contributes the value of phi AT the point times the right
/// jump of h (the convention forced by left-continuity of h).  Quadrature
/// panels never straddle a listed discontinuity of phi or a jump of h.
/// Reversed bounds negate the result.
double ks_integral(const Integrand& phi, const Integrator& h, double a, double b,
                   double tol = 1e-10);

Vec ks_integral(const VectorIntegrand& phi, const Integrator& h, double a, double b,
                double tol = 1e-10);

Mat ks_integral(const MatrixIntegrand& phi, const Integrator& h, double a, double b,
                double tol = 1e-10);

/// Indefinite integral H(t) = int_0^t phi dh as a scalar regulated path:
/// left-continuous, with jump records Delta+ H(tau_j) = phi(tau_j) * size_j.
RegulatedPath indefinite(const Integrand& phi, const Integrator& h, double tol = 1e-10);

} // namespace mdebif

#endif
