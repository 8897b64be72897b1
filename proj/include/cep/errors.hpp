// errors.hpp — Exception types for solver and contract failures.

#pragma once

#include <stdexcept>
#include <string>

namespace cep {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested Hilbert-space dimension exceeds the configured dense/sparse cap.
struct DimensionTooLarge : Error {
    using Error::Error;
};

// No PT-broken fixed-point branch exists for the given parameters.
struct NoBrokenBranch : Error {
    using Error::Error;
};

// Stationary Lyapunov equation has no solution: J has a non-negative mode.
struct NonHurwitzJacobian : Error {
    using Error::Error;
};

// Kronecker system for the Lyapunov solve is numerically singular.
struct SingularSystem : Error {
    using Error::Error;
};

// Aligned frame requested for a (near-)zero Bloch vector.
struct ZeroVector : Error {
    using Error::Error;
};

// Closed-form covariance evaluated at Z* = 0.
struct AtCriticalPoint : Error {
    using Error::Error;
};

// Liouvillian kernel is not one-dimensional (or the trace-replaced system is singular).
struct NonUniqueSteadyState : Error {
    using Error::Error;
};

// Steady state has eigenvalues below the admissible negativity floor.
struct NonPhysicalState : Error {
    using Error::Error;
};

// Mean spin length too small to define the squeezing frame.
struct ZeroMeanSpin : Error {
    using Error::Error;
};

// A diagnostic fit failed its validation residual.
struct FitFailure : Error {
    using Error::Error;
};

// Scaled curves share no common abscissa interval (or too few sizes).
struct InsufficientOverlap : Error {
    using Error::Error;
};

// The delta grid does not resolve the finite-size plateau.
struct PlateauNotResolved : Error {
    using Error::Error;
};

// Tangent frame undefined because the fixed point sits on the z axis.
struct DegenerateFrame : Error {
    using Error::Error;
};

// Configuration file / flag validation error.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace cep
