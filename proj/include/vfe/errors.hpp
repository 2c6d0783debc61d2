#ifndef VFE_ERRORS_HPP
#define VFE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vfe {

// Caller passed arguments that violate a documented precondition
// (mismatched sizes, bad config keys, CFL violation, ...).  CLI exit code 1.
struct UsageError : std::invalid_argument {
    explicit UsageError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Geometric invariant broken: point off the model surface, degenerate or
// self-intersecting sample set, non-tangent vector where one is required.
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// Base class for runtime numerical failures.  CLI exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Curvature fell below the resolvable threshold somewhere, so the Frenet
// frame (and everything downstream of it) is undefined there.
struct FrenetUndefinedError : NumericalError {
    explicit FrenetUndefinedError(const std::string& msg) : NumericalError(msg) {}
};

// A time step produced a state that violates the flow invariants
// (arclength drift, manifold constraint) beyond tolerance.
struct StepRejectedError : NumericalError {
    explicit StepRejectedError(const std::string& msg) : NumericalError(msg) {}
};

// The intrinsic curvature/torsion system left the resolvable regime
// (kappa below threshold or non-finite values).
struct IntrinsicBlowupError : NumericalError {
    explicit IntrinsicBlowupError(const std::string& msg) : NumericalError(msg) {}
};

} // namespace vfe

#endif
