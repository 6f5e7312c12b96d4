#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include "lfdyn/errors.hpp"

// Linear-fractional maps of the real projective line, specialised to the
// one-parameter family x -> 1/(u - x) and its inverse x -> u - 1/x.

namespace lfdyn {

enum class Regime { elliptic, hyperbolic };

// The real map parameter u.  u = 0 and |u| = 2 are rejected: the first
// degenerates every phase formula, the second is the parabolic boundary.
class MapParams {
  public:
    explicit MapParams(double u) : u_(u) {
        if (u == 0.0 || !std::isfinite(u))
            throw InvalidParameter("map parameter u must be finite and nonzero");
        if (std::abs(u) == 2.0)
            throw ParabolicBoundary("|u| = 2 is outside both regimes");
    }

    double u() const noexcept { return u_; }
    Regime regime() const noexcept {
        return std::abs(u_) < 2.0 ? Regime::elliptic : Regime::hyperbolic;
    }
    bool elliptic() const noexcept { return regime() == Regime::elliptic; }

  private:
    double u_;
};

// A point of the real projective line in homogeneous coordinates (p : q),
// x = p/q, with q = 0 representing infinity.  Representatives are kept
// scaled so that max(|p|, |q|) = 1; long orbits pass arbitrarily close to
// the pole of the map and unscaled coordinates drift out of range.
struct ProjectivePoint {
    double p = 0.0;
    double q = 1.0;

    ProjectivePoint() = default;

    ProjectivePoint(double p_, double q_) : p(p_), q(q_) {
        double m = std::max(std::abs(p), std::abs(q));
        if (m == 0.0 || !std::isfinite(m))
            throw InvalidParameter("projective point needs a finite nonzero representative");
        p /= m;
        q /= m;
    }

    static ProjectivePoint from_real(double x) {
        if (std::isinf(x)) return infinity();
        return ProjectivePoint(x, 1.0);
    }

    static ProjectivePoint infinity() noexcept {
        ProjectivePoint pt;
        pt.p = 1.0;
        pt.q = 0.0;
        return pt;
    }

    bool is_infinity() const noexcept { return q == 0.0; }

    // p/q; yields +-inf at the infinite point.
    double value() const noexcept { return p / q; }
};

// |p q' - p' q| on max-normalized representatives.  Continuous across the
// infinite point, bounded by 2, and ~|x - x'| for moderate finite values.
inline double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b) noexcept {
    return std::abs(a.p * b.q - b.p * a.q);
}

// 2x2 real matrix acting on the projective line; composition is matrix
// product.  Scalar multiples act identically.
struct MobiusMatrix {
    double m11 = 1.0, m12 = 0.0;
    double m21 = 0.0, m22 = 1.0;

    double det() const noexcept { return m11 * m22 - m12 * m21; }
    double trace() const noexcept { return m11 + m22; }

    static MobiusMatrix identity() noexcept { return {}; }

    // Forward map x -> 1/(u - x).
    static MobiusMatrix forward(const MapParams& params) noexcept {
        return {0.0, 1.0, -1.0, params.u()};
    }

    // Backward map x -> u - 1/x, the inverse of forward().
    static MobiusMatrix backward(const MapParams& params) noexcept {
        return {params.u(), -1.0, 1.0, 0.0};
    }

    MobiusMatrix operator*(const MobiusMatrix& o) const noexcept {
        return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
                m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
    }

    // Representative scaled so the largest entry magnitude is 1.
    MobiusMatrix normalized() const {
        double m = std::max(std::max(std::abs(m11), std::abs(m12)),
                            std::max(std::abs(m21), std::abs(m22)));
        if (m == 0.0 || !std::isfinite(m))
            throw InvalidParameter("matrix has no finite nonzero representative");
        return {m11 / m, m12 / m, m21 / m, m22 / m};
    }

    // Scalar multiple of the identity, up to tol, after normalization.
    bool is_scalar(double tol = 1e-12) const {
        MobiusMatrix n = normalized();
        return std::abs(n.m12) < tol && std::abs(n.m21) < tol && std::abs(n.m11 - n.m22) < tol;
    }
};

// Image of a point, renormalized.  Requires a nonsingular matrix; poles are
// absorbed by the homogeneous coordinates.
inline ProjectivePoint apply(const MobiusMatrix& m, const ProjectivePoint& x) noexcept {
    double p = m.m11 * x.p + m.m12 * x.q;
    double q = m.m21 * x.p + m.m22 * x.q;
    double s = std::max(std::abs(p), std::abs(q));
    ProjectivePoint out;
    out.p = p / s;
    out.q = q / s;
    return out;
}

// n-fold matrix product with per-step renormalization.
inline MobiusMatrix pow(const MobiusMatrix& m, std::int64_t n) {
    if (n < 0) throw InvalidParameter("matrix power wants n >= 0");
    MobiusMatrix acc = MobiusMatrix::identity();
    for (std::int64_t k = 0; k < n; ++k) acc = (m * acc).normalized();
    return acc;
}

// n successive applications of the forward map.
inline ProjectivePoint iterate_direct(const MapParams& params, ProjectivePoint x0,
                                      std::int64_t n) {
    if (n < 0) throw InvalidParameter("iterate_direct wants n >= 0");
    const MobiusMatrix s = MobiusMatrix::forward(params);
    ProjectivePoint x = x0;
    for (std::int64_t k = 0; k < n; ++k) x = apply(s, x);
    return x;
}

// Eigenvalue pair mu+- of the forward map's matrix (roots of
// mu^2 - u mu + 1 = 0) and the multiplier kappa = mu-/mu+.  In the elliptic
// regime kappa lies on the unit circle; in the hyperbolic regime it is real
// with |kappa| != 1.
struct ConjugationData {
    std::complex<double> mu_plus;
    std::complex<double> mu_minus;
    std::complex<double> kappa;
};

inline ConjugationData conjugation_data(const MapParams& params) {
    const double u = params.u();
    ConjugationData cd;
    if (params.elliptic()) {
        const double s = std::sqrt(4.0 - u * u);
        cd.mu_plus = {u / 2.0, s / 2.0};
        cd.mu_minus = std::conj(cd.mu_plus);
        // |mu+| = 1 here, so kappa = mu-/mu+ = mu-^2 has unit modulus; build
        // it from the half-angle so the modulus is exactly 1.
        const double half = std::atan2(s / 2.0, u / 2.0);
        cd.kappa = std::polar(1.0, -2.0 * half);
    } else {
        const double s = std::sqrt(u * u - 4.0);
        cd.mu_plus = (u + s) / 2.0;
        cd.mu_minus = (u - s) / 2.0;
        cd.kappa = cd.mu_minus / cd.mu_plus;
    }
    return cd;
}

namespace detail {

// kappa^n with the modulus pinned: polar exponentiation in the elliptic
// regime (angle reduced mod 2pi), real powers otherwise.
inline std::complex<double> multiplier_power(const ConjugationData& cd, bool elliptic,
                                             std::int64_t n) {
    if (elliptic) {
        const double ang = std::arg(cd.kappa);
        return std::polar(1.0, std::remainder(ang * static_cast<double>(n),
                                              2.0 * std::numbers::pi));
    }
    return std::pow(cd.kappa.real(), static_cast<double>(n));
}

// Recover a real projective point from a complex homogeneous pair that is a
// complex multiple of a real pair.  Divides out the phase of the dominant
// component and checks the imaginary residue.
inline ProjectivePoint real_point_from_complex(std::complex<double> P, std::complex<double> Q,
                                               double imag_tol = 1e-9) {
    const double ap = std::abs(P), aq = std::abs(Q);
    const std::complex<double> lead = ap >= aq ? P : Q;
    const std::complex<double> phase = lead / std::abs(lead);
    P /= phase;
    Q /= phase;
    const double scale = std::max(std::abs(P), std::abs(Q)); // >= |lead|/|phase| > 0
    P /= scale;
    Q /= scale;
    if (std::max(std::abs(P.imag()), std::abs(Q.imag())) > imag_tol)
        throw Error("closed-form iterate produced a non-real point");
    ProjectivePoint out;
    out.p = P.real();
    out.q = Q.real();
    return out;
}

} // namespace detail

// Closed-form n-th iterate of the forward map: the orbit is conjugate to
// y -> kappa y via y = (1 - mu+ x)/(mu- x - 1), so
//   x_n = (1 + kappa^n y_0) / (mu+ + mu- kappa^n y_0).
// Evaluated on homogeneous pairs so that orbits through infinity and the
// hyperbolic |kappa^n| overflow both stay finite.  A starting point equal to
// the fixed point mu+ (degenerate y_0 denominator) short-circuits to itself.
inline ProjectivePoint iterate_closed_form(const MapParams& params, ProjectivePoint x0,
                                           std::int64_t n) {
    if (n < 0) throw InvalidParameter("iterate_closed_form wants n >= 0");
    const ConjugationData cd = conjugation_data(params);

    if (!params.elliptic()) {
        // Exact projective hit on a real fixed point short-circuits; the
        // roundoff residue of y0 would otherwise leak the repelling point
        // onto the attracting one once kappa^n outruns it.
        for (double fp : {cd.mu_plus.real(), cd.mu_minus.real()})
            if (projective_distance(x0, ProjectivePoint::from_real(fp)) == 0.0) return x0;
    }

    // y0 = (q - mu+ p) / (mu- p - q) as a homogeneous pair.
    const std::complex<double> p0{x0.p, 0.0}, q0{x0.q, 0.0};
    const std::complex<double> y_num = q0 - cd.mu_plus * p0;
    const std::complex<double> y_den = cd.mu_minus * p0 - q0;
    if (std::abs(y_den) == 0.0) return x0; // x0 is the fixed point mu+

    std::complex<double> P, Q;
    const bool ell = params.elliptic();
    if (!ell && std::abs(cd.kappa.real()) > 1.0) {
        // Multiply the pair through by kappa^-n so nothing overflows.
        ConjugationData inv = cd;
        inv.kappa = 1.0 / cd.kappa;
        const std::complex<double> t = detail::multiplier_power(inv, false, n);
        P = y_den * t + y_num;
        Q = cd.mu_plus * y_den * t + cd.mu_minus * y_num;
    } else {
        const std::complex<double> t = detail::multiplier_power(cd, ell, n);
        P = y_den + t * y_num;
        Q = cd.mu_plus * y_den + cd.mu_minus * t * y_num;
    }
    return detail::real_point_from_complex(P, Q);
}

// Affine change of variable y = k1 x + k2.
struct AffineChange {
    double k1 = 1.0;
    double k2 = 0.0;
};

struct NormalizeResult {
    MapParams params;
    AffineChange affine;
};

// Reduce an arbitrary orientation-preserving non-affine matrix to the
// canonical forward map: conjugating m by y = k1 x + k2 gives the matrix of
// x -> 1/(u - x) up to scale, with u = trace/sqrt(det) (the similarity
// invariant).  Throws through MapParams when u lands on 0 or +-2.
inline NormalizeResult normalize(const MobiusMatrix& m) {
    if (m.m21 == 0.0) throw AffineMap("lower-left entry is zero; map is affine");
    const double d = m.det();
    if (d <= 0.0) throw OrientationReversing("normalize needs det > 0");
    const double root = std::sqrt(d);
    const double u = m.trace() / root;
    return {MapParams(u), AffineChange{-m.m21 / root, m.m11 / root}};
}

// Parameter u > 0 for which every orbit closes after exactly n steps:
// u^2 = 4 / (tan^2(pi/n) + 1), i.e. u = 2 cos(pi/n).  The n-th matrix power
// is then a scalar matrix.
inline MapParams cycle_parameter(int n) {
    if (n < 3) throw InvalidPeriod("cycle parameter wants n >= 3");
    return MapParams(2.0 * std::cos(std::numbers::pi / static_cast<double>(n)));
}

} // namespace lfdyn
