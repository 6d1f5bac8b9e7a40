#ifndef VGRD_ERRORS_HPP
#define VGRD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vgrd {

// Malformed or invariant-violating input (bad dimensions, out-of-range values,
// non-positive-definite covariances, ...).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Closed-form arrowhead determinant hit a near-zero shift denominator;
// callers should switch to the numeric determinant.
struct SingularShift : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A chi_j denominator 1 - rho0 - e_i is within tolerance of zero.
struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A closed form was requested outside its validity region (K - E not PSD).
struct SdcViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace vgrd

#endif // VGRD_ERRORS_HPP
