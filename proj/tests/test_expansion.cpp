#include <catch2/catch.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

#include "lfdyn/expansion.hpp"
#include "oracles.hpp"

using namespace lfdyn;
using Catch::Matchers::WithinAbs;
using cplx = std::complex<double>;

namespace {

cplx gaussian(double x) { return std::exp(-x * x); }

cplx shifted_lorentz(double x) {
    const double up = 0.7;
    return std::sqrt(4.0 - up * up) / (2.0 * std::numbers::pi) / (x * x - up * x + 1.0);
}

cplx bump(double x) {
    const double t = x / 2.0;
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

cplx inverse_quartic(double x) { return 1.0 / (1.0 + x * x * x * x); }

} // namespace

TEST_CASE("quadrature grid construction") {
    const MapParams p(1.2);
    SECTION("node count must be a power of two") {
        CHECK_THROWS_AS(QuadratureGrid(p, 1000), InvalidParameter);
        CHECK_NOTHROW(QuadratureGrid(p, 64));
    }
    SECTION("nodes are finite with positive weights") {
        const QuadratureGrid g(p, 256);
        REQUIRE(g.size() == 256);
        for (std::size_t j = 0; j < g.size(); ++j) {
            CHECK(std::isfinite(g.x_nodes()[j]));
            CHECK(g.weights()[j] > 0.0);
        }
    }
    SECTION("phase of each node matches its angle label") {
        for (double u : {1.2, -1.2, 0.5, 1.9}) {
            const QuadratureGrid g{MapParams(u), 128};
            const SpectralData& sd = g.spectral();
            for (std::size_t j = 0; j < g.size(); ++j) {
                const double diff = eval_theta(sd, g.x_nodes()[j]) - g.theta_nodes()[j];
                CHECK(std::abs(std::remainder(diff, 2.0 * std::numbers::pi)) < 1e-12);
            }
        }
    }
}

TEST_CASE("coefficients of the eigenbasis are Kronecker deltas") {
    for (double u : {1.2, -1.2, 0.5, 1.9}) {
        const MapParams p(u);
        const QuadratureGrid grid(p, 1024);
        const SpectralData& sd = grid.spectral();

        SECTION("invariant density at u = " + std::to_string(u)) {
            const auto c = compute_coefficients(
                p, [&sd](double x) { return sd.lorentzian(x); }, 8, grid);
            CHECK_THAT(std::abs(c.at(0)), WithinAbs(1.0, 1e-10));
            for (int n = -8; n <= 8; ++n)
                if (n != 0) CHECK(std::abs(c.at(n)) < 1e-10);
        }
        SECTION("third harmonic at u = " + std::to_string(u)) {
            const auto c = compute_coefficients(
                p, [&sd](double x) { return eval_eigenfunction(sd, {3}, x); }, 8, grid);
            CHECK_THAT(std::abs(c.at(3) - 1.0), WithinAbs(0.0, 1e-10));
            for (int n = -8; n <= 8; ++n)
                if (n != 3) CHECK(std::abs(c.at(n)) < 1e-10);
        }
    }
}

TEST_CASE("quadrature agrees with an independent adaptive rule") {
    const MapParams p(1.2);
    const QuadratureGrid grid(p);
    const SpectralData sd(p);
    const std::function<cplx(double)> battery[] = {gaussian, shifted_lorentz, bump,
                                                   inverse_quartic};
    for (const auto& f : battery) {
        const auto c = compute_coefficients(p, f, 8, grid);
        for (int n = -8; n <= 8; ++n) {
            const cplx oracle =
                std::polar(1.0, -n * sd.phi()) * oracles::line_coefficient(1.2, f, n);
            CHECK(std::abs(c.at(n) - oracle) < 1e-8);
        }
    }
}

TEST_CASE("coefficient structure for real input") {
    const MapParams p(1.2);
    const QuadratureGrid grid(p);
    const auto c = compute_coefficients(p, gaussian, 16, grid);
    SECTION("negative index is the conjugate") {
        for (int n = 1; n <= 16; ++n)
            CHECK(std::abs(c.at(-n) - std::conj(c.at(n))) < 1e-12);
    }
    SECTION("reconstruction is real") {
        const SpectralData sd(p);
        for (double x : {-3.0, -0.5, 0.0, 0.9, 4.2})
            CHECK(std::abs(reconstruct(sd, c, x).imag()) < 1e-8);
    }
}

TEST_CASE("non-decaying input is rejected") {
    const MapParams p(1.2);
    const QuadratureGrid grid(p);
    CHECK_THROWS_AS(compute_coefficients(p, [](double) { return 1.0; }, 4, grid),
                    NonIntegrable);
    CHECK_THROWS_AS(compute_coefficients(p, [](double x) { return std::sin(x); }, 4, grid),
                    NonIntegrable);
}

TEST_CASE("reconstruction") {
    const MapParams p(1.2);
    const SpectralData sd(p);
    SECTION("single zeroth coefficient gives back the density") {
        CoefficientSet c(1.2, 0);
        c.at(0) = 1.0;
        for (double x : {-2.0, 0.0, 0.6, 7.0})
            CHECK_THAT(reconstruct(sd, c, x).real(), WithinAbs(sd.lorentzian(x), 1e-14));
    }
    SECTION("fifth harmonic round trip") {
        const QuadratureGrid grid(p, 1024);
        const auto c = compute_coefficients(
            p, [&sd](double x) { return eval_eigenfunction(sd, {5}, x); }, 8, grid);
        const cplx rec = reconstruct(sd, c, 0.7);
        CHECK(std::abs(rec - eval_eigenfunction(sd, {5}, 0.7)) < 1e-12);
    }
    SECTION("band-limited inputs reproduce their coefficients") {
        std::mt19937 rng(64);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        const QuadratureGrid grid(p, 1024);
        CoefficientSet in(1.2, 5);
        for (int n = -5; n <= 5; ++n) in.at(n) = cplx(unif(rng), unif(rng));
        const auto f = [&](double x) { return reconstruct(sd, in, x); };
        const auto out = compute_coefficients(p, f, 5, grid);
        for (int n = -5; n <= 5; ++n) CHECK(std::abs(out.at(n) - in.at(n)) < 1e-9);
    }
}

TEST_CASE("doubling the grid does not move the coefficients") {
    const MapParams p(1.2);
    const QuadratureGrid coarse(p, 4096), fine(p, 8192);
    const std::function<cplx(double)> battery[] = {gaussian, shifted_lorentz, bump,
                                                   inverse_quartic};
    for (const auto& f : battery) {
        const auto a = compute_coefficients(p, f, 16, coarse);
        const auto b = compute_coefficients(p, f, 16, fine);
        for (int n = -16; n <= 16; ++n) CHECK(std::abs(a.at(n) - b.at(n)) < 1e-10);
    }
}

TEST_CASE("truncation error") {
    const MapParams p(1.2);
    const SpectralData sd(p);
    SECTION("expanding the density itself is exact at every order") {
        const auto f = [&sd](double x) { return sd.lorentzian(x); };
        CHECK(expansion_error(p, f, 0) < 1e-9);
        CHECK(expansion_error(p, f, 4) < 1e-9);
    }
    SECTION("finite harmonic combinations are exact once covered") {
        const auto f = [&sd](double x) {
            return eval_eigenfunction(sd, {2}, x) + eval_eigenfunction(sd, {-2}, x);
        };
        CHECK(expansion_error(p, f, 2) < 1e-9);
        CHECK(expansion_error(p, f, 6) < 1e-9);
    }
    SECTION("gaussian error falls with the harmonic count") {
        const double e16 = expansion_error(p, gaussian, 16);
        const double e32 = expansion_error(p, gaussian, 32);
        const double e64 = expansion_error(p, gaussian, 64);
        CHECK(e64 < e32);
        CHECK(e32 < e16);
        // regression fixtures
        CHECK_THAT(e16, WithinAbs(4.040365470145e-03, 4e-9));
        CHECK_THAT(e32, WithinAbs(6.460884931207e-05, 6e-11));
        CHECK_THAT(e64, WithinAbs(7.191883220902e-08, 7e-14));
    }
}
