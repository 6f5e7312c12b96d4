#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>

#include "lfdyn/errors.hpp"
#include "lfdyn/mobius.hpp"

// Exact spectral data of the transfer operator H_u f(x) = f(u - 1/x)/x^2 in
// the elliptic regime 0 < |u| < 2:
//
//   L_u(x)     = sqrt(4-u^2)/(2 pi) * 1/(x^2 - u x + 1)   invariant density,
//   phi        eigenphase, cos phi = (u^2-2)/2, sin phi = |u| sqrt(4-u^2)/2,
//   theta(x)   phase function with theta(u - 1/x) - theta(x) = phi (mod 2pi),
//   sigma_n(x) = L_u(x) e^{i n theta(x)}, eigenfunction with value e^{i n phi}.
//
// theta is the angle coordinate in which the map becomes a rigid rotation;
// its derivative is -sgn(u) 2 pi L_u(x).

namespace lfdyn {

// Callable on the real line with values convertible to complex<double>.
template <class F>
concept LineFunction = requires(F f, double x) {
    { std::complex<double>(f(x)) };
};

struct EigenIndex {
    int n = 0;
};

// Derived constants per u, precomputed once for the hot evaluation paths.
class SpectralData {
  public:
    explicit SpectralData(const MapParams& params) : u_(params.u()) {
        if (!params.elliptic())
            throw OutOfEllipticRange("spectral data exists only for 0 < |u| < 2");
        const double au = std::abs(u_);
        root_ = std::sqrt(4.0 - u_ * u_);
        cos_phi_ = (u_ * u_ - 2.0) / 2.0;
        sin_phi_ = au * root_ / 2.0;
        phi_ = std::atan2(sin_phi_, cos_phi_);
        // 1 + cos phi = u^2/2, so the discontinuity point is 2/u.
        x0_disc_ = 2.0 / u_;
        r_ = std::complex<double>(u_ * u_, au * root_) / (2.0 * u_);
        norm_ = root_ / (2.0 * std::numbers::pi);
    }

    double u() const noexcept { return u_; }
    double phi() const noexcept { return phi_; }
    double cos_phi() const noexcept { return cos_phi_; }
    double sin_phi() const noexcept { return sin_phi_; }
    double x0_disc() const noexcept { return x0_disc_; }
    std::complex<double> r() const noexcept { return r_; }

    double lorentzian(double x) const noexcept {
        return norm_ / ((x - u_) * x + 1.0);
    }

    double sign_u() const noexcept { return u_ < 0.0 ? -1.0 : 1.0; }

  private:
    double u_, root_, phi_, cos_phi_, sin_phi_, x0_disc_, norm_;
    std::complex<double> r_;
};

namespace detail {

// Continuous branch of the phase function.  The raw 2 arctan piece jumps by
// 2 pi across x0; the -2 pi sgn(u) step for x > x0 cancels the jump, and at
// x0 itself both one-sided limits equal -sgn(u) pi.
inline double theta_extended(const SpectralData& sd, double x) noexcept {
    if (x == sd.x0_disc()) return -sd.sign_u() * std::numbers::pi;
    double t = 2.0 * std::atan(x * sd.sin_phi() / (x * (1.0 + sd.cos_phi()) - sd.u()));
    if (x > sd.x0_disc()) t -= 2.0 * std::numbers::pi * sd.sign_u();
    return t;
}

} // namespace detail

inline double eval_phi(const SpectralData& sd) noexcept { return sd.phi(); }
inline double eval_phi(const MapParams& params) { return SpectralData(params).phi(); }

inline double eval_lorentzian(const SpectralData& sd, double x) noexcept {
    return sd.lorentzian(x);
}
inline double eval_lorentzian(const MapParams& params, double x) {
    return SpectralData(params).lorentzian(x);
}

inline double eval_theta(const SpectralData& sd, double x) {
    if (x == sd.x0_disc())
        throw AtDiscontinuity("theta has no single value at x = 2/u");
    return detail::theta_extended(sd, x);
}
inline double eval_theta(const MapParams& params, double x) {
    return eval_theta(SpectralData(params), x);
}

// Pole parameter R_u = (u^2 + i |u| sqrt(4-u^2)) / (2u); unit modulus, and
// R_u, R_u* are the complex roots of x^2 - u x + 1.
inline std::complex<double> r_u(const SpectralData& sd) noexcept { return sd.r(); }
inline std::complex<double> r_u(const MapParams& params) { return SpectralData(params).r(); }

// sigma_n(x) = L_u(x) e^{i n theta(x)}.  Defined for every real x: theta's
// branch ambiguity at x0 is a multiple of 2 pi and drops out of the phase.
inline std::complex<double> eval_eigenfunction(const SpectralData& sd, EigenIndex idx,
                                               double x) noexcept {
    const double th = detail::theta_extended(sd, x);
    return std::polar(sd.lorentzian(x), static_cast<double>(idx.n) * th);
}
inline std::complex<double> eval_eigenfunction(const MapParams& params, EigenIndex idx,
                                               double x) {
    return eval_eigenfunction(SpectralData(params), idx, x);
}

// Rational form of the same eigenfunctions,
//   (1/2 pi i)(|u|/u)(1/(x-R) - 1/(x-R*)) ((x-R*)/(x-R))^n,
// equal to eval_eigenfunction up to one unimodular constant per (u, n).
inline std::complex<double> eigenfunction_pole_form(const SpectralData& sd, EigenIndex idx,
                                                    double x) noexcept {
    const std::complex<double> r = sd.r();
    const std::complex<double> rc = std::conj(r);
    const std::complex<double> diff = 1.0 / (x - r) - 1.0 / (x - rc);
    const std::complex<double> ratio = (x - rc) / (x - r);
    const std::complex<double> pref =
        sd.sign_u() * diff / std::complex<double>(0.0, 2.0 * std::numbers::pi);
    return pref * std::pow(ratio, idx.n);
}
inline std::complex<double> eigenfunction_pole_form(const MapParams& params, EigenIndex idx,
                                                    double x) {
    return eigenfunction_pole_form(SpectralData(params), idx, x);
}

// H_u f at a point: f(u - 1/x)/x^2.
template <LineFunction F>
std::complex<double> apply_operator(const MapParams& params, F&& f, double x) {
    if (x == 0.0) throw PoleAtZero("operator kernel has a pole at x = 0");
    return std::complex<double>(std::forward<F>(f)(params.u() - 1.0 / x)) / (x * x);
}

// max over the sample of |H_u sigma_n - e^{i n phi} sigma_n|.  Sample points
// must avoid 0; x0 is harmless here.
inline double eigen_residual(const MapParams& params, EigenIndex idx,
                             std::span<const double> sample) {
    const SpectralData sd(params);
    const double nphi = static_cast<double>(idx.n) * sd.phi();
    double worst = 0.0;
    for (double x : sample) {
        auto sigma = [&](double t) { return eval_eigenfunction(sd, idx, t); };
        const std::complex<double> lhs = apply_operator(params, sigma, x);
        const std::complex<double> rhs = std::polar(1.0, nphi) * eval_eigenfunction(sd, idx, x);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

} // namespace lfdyn
