#ifndef MDEBIF_ERRORS_HPP
#define MDEBIF_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdebif {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed expression source; `offset` is the byte offset of the offending token.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t offset_)
        : Error(msg + " (at offset " + std::to_string(offset_) + ")"), offset(offset_) {}
    std::size_t offset;
};

/// Domain error while evaluating an expression (ln of non-positive, sqrt of
/// negative, division by zero, fractional power of a negative base).
struct EvalError : Error {
    EvalError(const std::string& msg, std::size_t offset_)
        : Error(msg + (offset_ ? " (near offset " + std::to_string(offset_) + ")" : "")),
          offset(offset_) {}
    std::size_t offset;
};

/// Differentiation hit a node without a derivative (heaviside).
struct NonDifferentiableError : Error {
    using Error::Error;
};

/// Invalid problem definition, schema violation or precondition failure.
struct ValidationError : Error {
    using Error::Error;
};

/// Adaptive quadrature failed to converge or met a NaN integrand.
struct QuadratureError : Error {
    using Error::Error;
};

/// Generic numerical failure in the time steppers / Newton iterations.
struct SolverError : Error {
    using Error::Error;
};

/// Trajectory left the domain box Omega.
struct DomainExitError : SolverError {
    DomainExitError(const std::string& msg, double exit_time_)
        : SolverError(msg), exit_time(exit_time_) {}
    double exit_time;
};

/// A jump factor I + g'_x * size failed to be invertible.
struct SingularJumpError : SolverError {
    using SolverError::SolverError;
};

/// Newton Jacobian M - I is numerically singular (degenerate periodic problem).
struct SingularJacobianError : SolverError {
    using SolverError::SolverError;
};

/// Iteration limit exceeded without meeting the tolerance.
struct ConvergenceError : SolverError {
    using SolverError::SolverError;
};

} // namespace mdebif

#endif
