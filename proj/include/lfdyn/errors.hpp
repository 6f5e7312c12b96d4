#pragma once

#include <stdexcept>
#include <string>

namespace lfdyn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Map parameter u is zero (the map and all phase formulas degenerate).
struct InvalidParameter final : Error {
    using Error::Error;
};

// |u| = 2, the parabolic boundary between the elliptic and hyperbolic regimes.
struct ParabolicBoundary final : Error {
    using Error::Error;
};

// Spectral quantities (phi, theta, eigenfunctions) exist only for 0 < |u| < 2.
struct OutOfEllipticRange final : Error {
    using Error::Error;
};

// normalize(): the lower-left entry vanishes, the map is affine.
struct AffineMap final : Error {
    using Error::Error;
};

// normalize(): determinant <= 0, trace/sqrt(det) is not real.
struct OrientationReversing final : Error {
    using Error::Error;
};

// cycle_parameter(): period must be at least 3.
struct InvalidPeriod final : Error {
    using Error::Error;
};

// apply_operator(): the operator kernel has a pole at x = 0.
struct PoleAtZero final : Error {
    using Error::Error;
};

// eval_theta(): the phase function has no single value at x = x0_disc.
struct AtDiscontinuity final : Error {
    using Error::Error;
};

// compute_coefficients(): the integrand does not decay, tail nodes dominate.
struct NonIntegrable final : Error {
    using Error::Error;
};

// generalized_residual(): the supplied inverse does not invert the map.
struct InverseMismatch final : Error {
    using Error::Error;
};

} // namespace lfdyn
