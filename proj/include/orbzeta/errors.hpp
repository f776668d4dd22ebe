#ifndef ORBZETA_ERRORS_HPP
#define ORBZETA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace orbzeta {

// Base class for all numeric failures raised by this library.
struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : NumericsError {
    using NumericsError::NumericsError;
};
struct PoleAt1 : NumericsError {
    using NumericsError::NumericsError;
};
struct PoleAtZero : NumericsError {
    using NumericsError::NumericsError;
};
struct PoleAtOne : NumericsError {
    using NumericsError::NumericsError;
};
struct PoleAtNonpositiveInteger : NumericsError {
    using NumericsError::NumericsError;
};
struct ConvergenceFailure : NumericsError {
    using NumericsError::NumericsError;
};
struct NewtonFailure : NumericsError {
    using NumericsError::NumericsError;
};
struct OutOfRange : NumericsError {
    using NumericsError::NumericsError;
};
struct EpsTooLarge : NumericsError {
    using NumericsError::NumericsError;
};
struct OrbitTooShort : NumericsError {
    using NumericsError::NumericsError;
};
struct GridTooCoarse : NumericsError {
    using NumericsError::NumericsError;
};
struct OutOfHalfPlane : NumericsError {
    using NumericsError::NumericsError;
};
struct QuadratureFailure : NumericsError {
    using NumericsError::NumericsError;
};
struct RadiusTooSmall : NumericsError {
    using NumericsError::NumericsError;
};
struct NonConvergent : NumericsError {
    using NumericsError::NumericsError;
};
struct IllConditioned : NumericsError {
    using NumericsError::NumericsError;
};
struct InsufficientRange : NumericsError {
    using NumericsError::NumericsError;
};
struct NonIntegralMultiplicity : NumericsError {
    using NumericsError::NumericsError;
};
struct DuplicateExponent : NumericsError {
    using NumericsError::NumericsError;
};

} // namespace orbzeta

#endif
