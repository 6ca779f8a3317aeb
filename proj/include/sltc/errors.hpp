#pragma once

#include <stdexcept>
#include <string>

namespace sltc {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation of a rational coupling requested within the proximity band of one
// of its real poles.
struct PoleEvaluation : Error {
    using Error::Error;
};

// Reciprocal expansion requested for a coupling whose eigenparameter slope is zero.
struct SlopeZero : Error {
    using Error::Error;
};

// Zero/pole data passed to the interlacing constructor is not strictly interlaced.
struct InterlacingViolation : Error {
    using Error::Error;
};

// Adaptive integration could not reach the requested tolerance (step underflow
// or step budget exhausted).
struct IntegratorFailure : Error {
    using Error::Error;
};

// A pole-classification query at a point that is not near any coupling pole.
struct NotAPole : Error {
    using Error::Error;
};

// A Green's function / resolvent evaluation at (or numerically indistinguishable
// from) an eigenvalue, where the kernel does not exist.
struct EigenvalueLambda : Error {
    using Error::Error;
};

// A block vector handed to the operator does not satisfy the domain conditions.
struct DomainViolation : Error {
    using Error::Error;
};

// Discretization too coarse to resolve the requested data.
struct MeshTooCoarse : Error {
    using Error::Error;
};

// Dense eigensolver did not converge.
struct EigensolverFailure : Error {
    using Error::Error;
};

// Root refinement or another numerical subroutine failed to converge.
struct NumericalFailure : Error {
    using Error::Error;
};

// Problem/data file could not be parsed or fails validation; the message names
// the file, the offending field, and the violated constraint.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace sltc
