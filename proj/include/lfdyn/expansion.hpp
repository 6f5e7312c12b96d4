#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "lfdyn/errors.hpp"
#include "lfdyn/mobius.hpp"
#include "lfdyn/spectral.hpp"

// Series expansion of real-line functions in the eigenbasis {sigma_n}:
//
//   f(x) = sum_n C_n sigma_n(x),   C_n = integral f(x) e^{-i n theta(x)} dx.
//
// The coefficient integral is evaluated after the change of variable
// x -> theta.  d theta/dx = -sgn(u) 2 pi L_u(x), so the line integral turns
// into a circle average of the smooth periodic function f(x(theta))/L_u(x(theta)),
// and the uniform half-offset node rule converges spectrally.

namespace lfdyn {

class CoefficientSet {
  public:
    CoefficientSet(double u, int n_max)
        : u_(u), n_max_(n_max),
          c_(static_cast<std::size_t>(2 * n_max + 1), std::complex<double>{}) {
        if (n_max < 0) throw InvalidParameter("coefficient set wants n_max >= 0");
    }

    double u() const noexcept { return u_; }
    int n_max() const noexcept { return n_max_; }

    std::complex<double>& at(int n) { return c_[index(n)]; }
    const std::complex<double>& at(int n) const { return c_[index(n)]; }

  private:
    std::size_t index(int n) const {
        if (n < -n_max_ || n > n_max_) throw InvalidParameter("coefficient index out of range");
        return static_cast<std::size_t>(n + n_max_);
    }

    double u_;
    int n_max_;
    std::vector<std::complex<double>> c_;
};

// Uniform circle rule for the coefficient integrals.  Nodes sit at
// u_j = (j + 1/2) 2 pi / N on the angle circle; the half-step offset keeps
// them away from the wrap point, which is the image of x = infinity.  The
// preimages follow from inverting e^{i(theta - phi)} = (x - R*)/(x - R):
//   x_j = u/2 - sqrt(4 - u^2)/2 * cot(u_j / 2),   theta_j = phi - sgn(u) u_j,
// and the weight 1/(N L_u(x_j)) is the Jacobian of the substitution.
class QuadratureGrid {
  public:
    explicit QuadratureGrid(const MapParams& params, std::size_t node_count = 4096)
        : sd_(params) {
        if (node_count < 2 || !std::has_single_bit(node_count))
            throw InvalidParameter("node count must be a power of two");
        const std::size_t n = node_count;
        const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
        const double half_width = std::sqrt(4.0 - sd_.u() * sd_.u()) / 2.0;
        theta_.resize(n);
        x_.resize(n);
        w_.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double uj = (static_cast<double>(j) + 0.5) * step;
            x_[j] = sd_.u() / 2.0 - half_width / std::tan(uj / 2.0);
            theta_[j] = sd_.phi() - sd_.sign_u() * uj;
            w_[j] = 1.0 / (static_cast<double>(n) * sd_.lorentzian(x_[j]));
        }
    }

    std::size_t size() const noexcept { return x_.size(); }
    std::span<const double> theta_nodes() const noexcept { return theta_; }
    std::span<const double> x_nodes() const noexcept { return x_; }
    std::span<const double> weights() const noexcept { return w_; }
    const SpectralData& spectral() const noexcept { return sd_; }

  private:
    SpectralData sd_;
    std::vector<double> theta_;
    std::vector<double> x_;
    std::vector<double> w_;
};

// C_n for n in [-n_max, n_max] by the circle rule.  The outermost nodes on
// each side carry the whole tail of the line integral; if any of their
// summands exceeds tail_tolerance the input does not decay fast enough for
// the expansion to make sense.
template <LineFunction F>
CoefficientSet compute_coefficients(const MapParams& params, F&& f, int n_max,
                                    const QuadratureGrid& grid, double tail_tolerance = 1e-2) {
    if (params.u() != grid.spectral().u())
        throw InvalidParameter("grid was built for a different u");
    if (n_max < 0) throw InvalidParameter("compute_coefficients wants n_max >= 0");

    const std::size_t n = grid.size();
    const auto xs = grid.x_nodes();
    const auto ws = grid.weights();
    const auto ths = grid.theta_nodes();

    std::vector<std::complex<double>> summand(n);
    for (std::size_t j = 0; j < n; ++j)
        summand[j] = std::complex<double>(f(xs[j])) * ws[j];

    const std::size_t guard = std::min<std::size_t>(4, n / 2);
    for (std::size_t j = 0; j < guard; ++j) {
        if (std::abs(summand[j]) > tail_tolerance ||
            std::abs(summand[n - 1 - j]) > tail_tolerance)
            throw NonIntegrable("tail nodes dominate the coefficient sum");
    }

    CoefficientSet coeffs(params.u(), n_max);
    for (int k = -n_max; k <= n_max; ++k) {
        std::complex<double> acc{};
        const double kd = static_cast<double>(k);
        for (std::size_t j = 0; j < n; ++j)
            acc += summand[j] * std::polar(1.0, -kd * ths[j]);
        coeffs.at(k) = acc;
    }
    return coeffs;
}

// sum_n C_n sigma_n(x) over the stored index range, evaluated as
// L_u(x) z^{-n_max} P(z) with z = e^{i theta(x)} and P read off by Horner.
inline std::complex<double> reconstruct(const SpectralData& sd, const CoefficientSet& coeffs,
                                        double x) {
    const double th = detail::theta_extended(sd, x);
    const std::complex<double> z = std::polar(1.0, th);
    const int m = coeffs.n_max();
    std::complex<double> acc{};
    for (int k = m; k >= -m; --k) acc = acc * z + coeffs.at(k);
    return sd.lorentzian(x) * acc * std::polar(1.0, -static_cast<double>(m) * th);
}
inline std::complex<double> reconstruct(const MapParams& params, const CoefficientSet& coeffs,
                                        double x) {
    return reconstruct(SpectralData(params), coeffs, x);
}

// L1 distance between f and its truncated reconstruction on the reporting
// window [-8, 8], trapezoid rule on a 2001-point uniform grid.
template <LineFunction F>
double expansion_error(const MapParams& params, F&& f, int n_max) {
    const QuadratureGrid grid(params);
    const CoefficientSet coeffs = compute_coefficients(params, f, n_max, grid);
    const SpectralData sd = grid.spectral();

    constexpr int points = 2001;
    constexpr double lo = -8.0, hi = 8.0;
    const double dx = (hi - lo) / (points - 1);
    double sum = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = lo + dx * i;
        const double diff = std::abs(std::complex<double>(f(x)) - reconstruct(sd, coeffs, x));
        sum += (i == 0 || i == points - 1) ? 0.5 * diff : diff;
    }
    return sum * dx;
}

} // namespace lfdyn
