#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "lfdyn/errors.hpp"
#include "lfdyn/mobius.hpp"
#include "lfdyn/spectral.hpp"

// Orbit statistics of x -> 1/(u - x).  In the elliptic regime the orbit
// equidistributes with the invariant density L_u; in the hyperbolic regime
// it collapses onto the attracting fixed point.

namespace lfdyn {

struct OrbitConfig {
    double u = 1.2;
    double x0 = 0.3;
    std::int64_t n_samples = 0;
    std::int64_t burn_in = 0;
    double window_lo = -8.0;
    double window_hi = 8.0;
    int bins = 200;
};

// Fixed-window tally with explicit out-of-window mass on each side.  Counts
// are doubles so synthetic mass can be deposited exactly.
class Histogram {
  public:
    Histogram(double lo, double hi, int bins)
        : lo_(lo), hi_(hi), counts_(static_cast<std::size_t>(bins), 0.0) {
        if (!(lo < hi) || bins < 1) throw InvalidParameter("histogram wants lo < hi, bins >= 1");
        width_ = (hi - lo) / bins;
    }

    void add(double x) noexcept {
        if (x < lo_)
            below_ += 1.0;
        else if (x >= hi_)
            above_ += 1.0;
        else
            counts_[static_cast<std::size_t>((x - lo_) / width_)] += 1.0;
    }

    void deposit(int bin, double mass) { counts_.at(static_cast<std::size_t>(bin)) += mass; }
    void deposit_below(double mass) noexcept { below_ += mass; }
    void deposit_above(double mass) noexcept { above_ += mass; }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    int bins() const noexcept { return static_cast<int>(counts_.size()); }
    double bin_width() const noexcept { return width_; }
    double bin_center(int i) const noexcept { return lo_ + width_ * (i + 0.5); }
    double bin_edge(int i) const noexcept { return lo_ + width_ * i; }
    double count(int i) const { return counts_.at(static_cast<std::size_t>(i)); }
    double below() const noexcept { return below_; }
    double above() const noexcept { return above_; }
    double outside() const noexcept { return below_ + above_; }

    double total() const noexcept {
        double t = below_ + above_;
        for (double c : counts_) t += c;
        return t;
    }

    // Normalized bin density count/(total * width).
    double density(int i) const { return count(i) / (total() * width_); }

  private:
    double lo_, hi_, width_;
    std::vector<double> counts_;
    double below_ = 0.0, above_ = 0.0;
};

struct OrbitSample {
    Histogram histogram;
    // Smallest detected return period <= 64 (0 if none): the orbit is a
    // finite cycle and the histogram is atomic.
    int atomic_period = 0;
    // u sits within 1e-9 of a simple cycle parameter with period <= 64;
    // equidistribution would be too slow to trust at desk-scale N.
    bool near_cycle = false;
};

inline bool near_cycle_parameter(double u, int max_period = 64, double tol = 1e-9) {
    const double au = std::abs(u);
    for (int n = 3; n <= max_period; ++n)
        if (std::abs(au - 2.0 * std::cos(std::numbers::pi / n)) < tol) return true;
    return false;
}

// Iterate the forward map in projective coordinates, discard burn_in steps,
// bin n_samples points.  Deterministic: no randomness anywhere.
inline OrbitSample sample_orbit(const OrbitConfig& cfg) {
    const MapParams params(cfg.u);
    if (!params.elliptic())
        throw OutOfEllipticRange("orbit sampling needs |u| < 2; use the fixed point for |u| > 2");
    if (cfg.n_samples < 1) throw InvalidParameter("orbit sampling wants n_samples >= 1");
    if (cfg.burn_in < 0) throw InvalidParameter("burn_in must be nonnegative");

    OrbitSample out{Histogram(cfg.window_lo, cfg.window_hi, cfg.bins), 0,
                    near_cycle_parameter(cfg.u)};
    const MobiusMatrix s = MobiusMatrix::forward(params);

    ProjectivePoint x = ProjectivePoint::from_real(cfg.x0);
    for (std::int64_t k = 0; k < cfg.burn_in; ++k) x = apply(s, x);

    const ProjectivePoint start = x;
    constexpr int period_scan = 64;
    for (std::int64_t k = 0; k < cfg.n_samples; ++k) {
        out.histogram.add(x.value());
        x = apply(s, x);
        if (out.atomic_period == 0 && k < period_scan &&
            projective_distance(x, start) < 1e-12)
            out.atomic_period = static_cast<int>(k) + 1;
    }
    return out;
}

// Limiting orbit density: the invariant density L_u, which satisfies
// rho(z) = rho(u - 1/z)/z^2 identically.
inline double analytic_density(const MapParams& params, double z) {
    return eval_lorentzian(params, z);
}
inline double analytic_density(const SpectralData& sd, double z) noexcept {
    return sd.lorentzian(z);
}

// Closed-form antiderivative: 1/2 + arctan((2z - u)/sqrt(4 - u^2))/pi.
inline double analytic_cdf(const SpectralData& sd, double z) noexcept {
    const double root = std::sqrt(4.0 - sd.u() * sd.u());
    return 0.5 + std::atan((2.0 * z - sd.u()) / root) / std::numbers::pi;
}
inline double analytic_cdf(const MapParams& params, double z) {
    return analytic_cdf(SpectralData(params), z);
}

struct DensityReport {
    Histogram histogram;
    std::vector<double> analytic; // density at bin centers
    double ks_distance = 0.0;     // sup |empirical CDF - analytic CDF| at bin edges
    double sup_bin_error = 0.0;   // sup |bin density - analytic density|
};

// Empirical-vs-analytic comparison.  The CDF comparison runs over all bin
// edges including the window ends, where the below/above tallies carry the
// outside mass against 1 - (CDF(hi) - CDF(lo)).
inline DensityReport compare_density(const Histogram& hist, const MapParams& params) {
    const SpectralData sd(params);
    DensityReport report{hist, {}, 0.0, 0.0};
    const double total = hist.total();
    report.analytic.resize(static_cast<std::size_t>(hist.bins()));

    double cumulative = hist.below();
    double ks = std::abs(cumulative / total - analytic_cdf(sd, hist.bin_edge(0)));
    for (int i = 0; i < hist.bins(); ++i) {
        const double center = hist.bin_center(i);
        const double analytic = sd.lorentzian(center);
        report.analytic[static_cast<std::size_t>(i)] = analytic;
        report.sup_bin_error =
            std::max(report.sup_bin_error, std::abs(hist.density(i) - analytic));
        cumulative += hist.count(i);
        ks = std::max(ks, std::abs(cumulative / total - analytic_cdf(sd, hist.bin_edge(i + 1))));
    }
    report.ks_distance = ks;
    return report;
}

// The attracting fixed point for |u| > 2, where the orbit density is a point
// mass: 1/mu+ when |kappa| < 1, 1/mu- when |kappa| > 1.
inline double point_attractor(const MapParams& params) {
    if (params.elliptic())
        throw InvalidParameter("point attractor exists only for |u| > 2");
    const ConjugationData cd = conjugation_data(params);
    const double mu = std::abs(cd.kappa.real()) < 1.0 ? cd.mu_plus.real() : cd.mu_minus.real();
    return 1.0 / mu;
}

// Residual of the invariance equation rho(z) = F'(z) rho(F(z)) for an
// arbitrary forward map f with inverse F, with F' supplied by the caller.
template <class Fwd, class Inv, class Rho, class InvDeriv>
double generalized_residual(Fwd&& fwd, Inv&& inv, Rho&& rho, std::span<const double> sample,
                            InvDeriv&& inv_deriv) {
    double worst = 0.0;
    for (double z : sample) {
        const double back = inv(z);
        if (std::abs(fwd(back) - z) > 1e-8)
            throw InverseMismatch("supplied inverse does not invert the map");
        worst = std::max(worst, std::abs(rho(z) - inv_deriv(z) * rho(back)));
    }
    return worst;
}

// Same, with F' by central finite differences (step 1e-6).
template <class Fwd, class Inv, class Rho>
double generalized_residual(Fwd&& fwd, Inv&& inv, Rho&& rho, std::span<const double> sample) {
    constexpr double h = 1e-6;
    auto fd = [&inv](double z) { return (inv(z + h) - inv(z - h)) / (2.0 * h); };
    return generalized_residual(std::forward<Fwd>(fwd), std::forward<Inv>(inv),
                                std::forward<Rho>(rho), sample, fd);
}

} // namespace lfdyn
