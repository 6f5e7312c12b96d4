#include <catch2/catch.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "lfdyn/mobius.hpp"

using namespace lfdyn;
using Catch::Matchers::WithinAbs;

namespace {
const double kTestU[] = {0.5, -0.5, 1.2, -1.2, 1.9, -1.9, 3.0, -3.0};
}

TEST_CASE("map parameter validation") {
    CHECK_THROWS_AS(MapParams(0.0), InvalidParameter);
    CHECK_THROWS_AS(MapParams(2.0), ParabolicBoundary);
    CHECK_THROWS_AS(MapParams(-2.0), ParabolicBoundary);
    CHECK(MapParams(1.2).regime() == Regime::elliptic);
    CHECK(MapParams(-1.99).regime() == Regime::elliptic);
    CHECK(MapParams(2.5).regime() == Regime::hyperbolic);
    CHECK(MapParams(-3.0).regime() == Regime::hyperbolic);
}

TEST_CASE("projective points") {
    CHECK_THROWS_AS(ProjectivePoint(0.0, 0.0), InvalidParameter);

    SECTION("scaling does not matter") {
        CHECK(projective_distance(ProjectivePoint(2.0, 4.0), ProjectivePoint(1.0, 2.0)) == 0.0);
        CHECK(projective_distance(ProjectivePoint(-3.0, 0.0), ProjectivePoint::infinity()) == 0.0);
    }
    SECTION("value round trip") {
        CHECK(ProjectivePoint::from_real(0.7).value() == 0.7);
        CHECK(std::isinf(ProjectivePoint::infinity().value()));
    }
}

TEST_CASE("matrix action on points") {
    const MapParams one(1.0);
    const auto s = MobiusMatrix::forward(one);
    const auto t = MobiusMatrix::backward(one);

    SECTION("forward map takes 2 to -1") {
        auto img = apply(s, ProjectivePoint::from_real(2.0));
        CHECK_THAT(img.value(), WithinAbs(-1.0, 1e-15));
    }
    SECTION("backward map sends 0 to infinity") {
        auto img = apply(t, ProjectivePoint::from_real(0.0));
        CHECK(img.p == -1.0);
        CHECK(img.q == 0.0);
    }
    SECTION("identity is inert") {
        auto img = apply(MobiusMatrix::identity(), ProjectivePoint::from_real(0.7));
        CHECK_THAT(img.value(), WithinAbs(0.7, 1e-15));
    }
    SECTION("canonical matrices are mutually inverse") {
        CHECK((t * s).is_scalar(1e-15));
        CHECK((s * t).is_scalar(1e-15));
        std::mt19937 rng(101);
        std::uniform_real_distribution<double> unif(-10.0, 10.0);
        for (double u : kTestU) {
            const MapParams p(u);
            const auto fwd = MobiusMatrix::forward(p);
            const auto bwd = MobiusMatrix::backward(p);
            for (int i = 0; i < 50; ++i) {
                auto x = ProjectivePoint::from_real(unif(rng));
                CHECK(projective_distance(apply(bwd, apply(fwd, x)), x) < 1e-12);
            }
        }
    }
}

TEST_CASE("direct iteration") {
    SECTION("period-3 orbit at u = 1") {
        const MapParams p(1.0);
        auto x = ProjectivePoint::from_real(2.0);
        auto x3 = iterate_direct(p, x, 3);
        CHECK(projective_distance(x3, x) == 0.0);
        CHECK_THAT(iterate_direct(p, x, 1).value(), WithinAbs(-1.0, 1e-15));
        CHECK_THAT(iterate_direct(p, x, 2).value(), WithinAbs(0.5, 1e-15));
    }
    SECTION("hyperbolic orbits settle on the attracting fixed point") {
        const MapParams p(3.0);
        const double fixed = (3.0 - std::sqrt(5.0)) / 2.0;
        auto x = iterate_direct(p, ProjectivePoint::from_real(1.0), 50);
        CHECK_THAT(x.value(), WithinAbs(fixed, 1e-9));
    }
    SECTION("zero steps is the identity") {
        auto x0 = ProjectivePoint::from_real(-0.37);
        CHECK(projective_distance(iterate_direct(MapParams(1.7), x0, 0), x0) == 0.0);
    }
}

TEST_CASE("closed-form iteration matches the direct loop") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    for (double u : kTestU) {
        const MapParams p(u);
        for (int i = 0; i < 20; ++i) {
            const auto x0 = ProjectivePoint::from_real(unif(rng));
            for (std::int64_t n : {1, 7, 100, 1000}) {
                const auto direct = iterate_direct(p, x0, n);
                const auto closed = iterate_closed_form(p, x0, n);
                INFO("u=" << u << " x0=" << x0.value() << " n=" << n);
                CHECK(projective_distance(direct, closed) < 1e-9);
            }
        }
    }
}

TEST_CASE("closed-form special cases") {
    SECTION("period-3 return at u = 1") {
        const MapParams p(1.0);
        auto x = iterate_closed_form(p, ProjectivePoint::from_real(2.0), 3);
        CHECK(projective_distance(x, ProjectivePoint::from_real(2.0)) < 1e-12);
    }
    SECTION("long elliptic run") {
        const MapParams p(1.2);
        const auto x0 = ProjectivePoint::from_real(0.3);
        CHECK(projective_distance(iterate_closed_form(p, x0, 1000),
                                  iterate_direct(p, x0, 1000)) < 1e-9);
    }
    SECTION("fixed points stay put for any n, including the repelling one") {
        const MapParams p(3.0);
        const double mu_plus = (3.0 + std::sqrt(5.0)) / 2.0;
        for (std::int64_t n : {0, 1, 5, 100, 100000}) {
            auto x = iterate_closed_form(p, ProjectivePoint::from_real(mu_plus), n);
            CHECK_THAT(x.value(), WithinAbs(mu_plus, 1e-12));
        }
    }
    SECTION("orbit through infinity") {
        // x = u hits the pole; the next step must come back in from infinity.
        const MapParams p(0.5);
        const auto x0 = ProjectivePoint::from_real(0.5);
        CHECK(iterate_direct(p, x0, 1).is_infinity());
        CHECK_THAT(iterate_direct(p, x0, 2).value(), WithinAbs(0.0, 1e-15));
        CHECK(projective_distance(iterate_closed_form(p, x0, 1), ProjectivePoint::infinity()) <
              1e-12);
        CHECK_THAT(iterate_closed_form(p, x0, 2).value(), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("normalization of general matrices") {
    SECTION("already canonical") {
        const auto res = normalize(MobiusMatrix{0.0, 1.0, -1.0, 1.5});
        CHECK(res.params.u() == 1.5);
        CHECK(res.affine.k1 == 1.0);
        CHECK(res.affine.k2 == 0.0);
    }
    SECTION("trace over root det") {
        const auto res = normalize(MobiusMatrix{1.0, 1.0, -1.0, 1.0});
        CHECK_THAT(res.params.u(), WithinAbs(std::sqrt(2.0), 1e-15));
    }
    SECTION("rejects affine and orientation-reversing input") {
        CHECK_THROWS_AS(normalize(MobiusMatrix{1.0, 1.0, 0.0, 1.0}), AffineMap);
        CHECK_THROWS_AS(normalize(MobiusMatrix{1.0, 2.0, 1.0, 1.0}), OrientationReversing);
    }
    SECTION("affine change conjugates the orbit onto the canonical one") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> entry(-2.0, 2.0);
        std::uniform_real_distribution<double> start(-3.0, 3.0);
        int tried = 0;
        while (tried < 25) {
            MobiusMatrix m{entry(rng), entry(rng), entry(rng), entry(rng)};
            if (m.det() <= 0.01 || std::abs(m.m21) < 0.01) continue;
            NormalizeResult res{MapParams(1.0), {}};
            try {
                res = normalize(m);
            } catch (const Error&) {
                continue; // u landed on 0 or the parabolic boundary
            }
            ++tried;
            const double x0 = start(rng);
            auto y = ProjectivePoint::from_real(res.affine.k1 * x0 + res.affine.k2);
            auto x = ProjectivePoint::from_real(x0);
            for (int n = 1; n <= 20; ++n) {
                x = apply(m, x);
                y = iterate_direct(res.params, y, 1);
                ProjectivePoint mapped(res.affine.k1 * x.p + res.affine.k2 * x.q, x.q);
                INFO("step " << n << " u=" << res.params.u());
                REQUIRE(projective_distance(mapped, y) < 1e-9);
            }
        }
    }
}

TEST_CASE("conjugation data") {
    SECTION("elliptic example u = 1") {
        const auto cd = conjugation_data(MapParams(1.0));
        CHECK_THAT(cd.mu_plus.real(), WithinAbs(0.5, 1e-15));
        CHECK_THAT(cd.mu_plus.imag(), WithinAbs(std::sqrt(3.0) / 2.0, 1e-15));
        CHECK_THAT(std::abs(cd.kappa), WithinAbs(1.0, 1e-15));
        CHECK_THAT(std::arg(cd.kappa), WithinAbs(-2.0 * std::numbers::pi / 3.0, 1e-14));
    }
    SECTION("hyperbolic example u = 3") {
        const auto cd = conjugation_data(MapParams(3.0));
        CHECK_THAT(cd.mu_plus.real(), WithinAbs(2.618034, 1e-6));
        CHECK_THAT(cd.mu_minus.real(), WithinAbs(0.381966, 1e-6));
        CHECK_THAT(cd.kappa.real(), WithinAbs(0.145898, 1e-6));
        CHECK(cd.mu_plus.imag() == 0.0);
    }
    SECTION("Vieta relations and multiplier regime") {
        for (double u : kTestU) {
            const auto cd = conjugation_data(MapParams(u));
            CHECK(std::abs(cd.mu_plus * cd.mu_minus - 1.0) < 1e-14);
            CHECK(std::abs(cd.mu_plus + cd.mu_minus - u) < 1e-14);
            if (std::abs(u) < 2.0)
                CHECK_THAT(std::abs(cd.kappa), WithinAbs(1.0, 1e-15));
            else
                CHECK(std::abs(std::abs(cd.kappa) - 1.0) > 0.5);
        }
    }
    SECTION("multiplier phase agrees with 2 arctan(sqrt(4-u^2)/u) up to orientation") {
        for (double u : {0.5, 1.2, 1.9, -0.5, -1.2}) {
            const auto cd = conjugation_data(MapParams(u));
            const double phip = 2.0 * std::atan(std::sqrt(4.0 - u * u) / u);
            CHECK_THAT(std::cos(std::arg(cd.kappa)), WithinAbs(std::cos(phip), 1e-13));
        }
    }
    SECTION("y coordinate turns the map into multiplication by kappa") {
        std::mt19937 rng(55);
        std::uniform_real_distribution<double> unif(-10.0, 10.0);
        for (double u : kTestU) {
            const MapParams p(u);
            const auto cd = conjugation_data(p);
            auto y_of = [&cd](double x) {
                return (1.0 - cd.mu_plus * x) / (cd.mu_minus * x - 1.0);
            };
            for (int i = 0; i < 100; ++i) {
                const double x = unif(rng);
                if (std::abs(u - x) < 1e-3) continue;
                const double sx = 1.0 / (u - x);
                CHECK(std::abs(y_of(sx) - cd.kappa * y_of(x)) <
                      1e-10 * std::max(1.0, std::abs(y_of(x))));
            }
        }
    }
}

TEST_CASE("cycle parameters") {
    SECTION("closed forms for small periods") {
        CHECK_THAT(cycle_parameter(3).u(), WithinAbs(1.0, 1e-12));
        CHECK_THAT(cycle_parameter(4).u(), WithinAbs(std::sqrt(2.0), 1e-12));
        CHECK_THAT(cycle_parameter(6).u(), WithinAbs(std::sqrt(3.0), 1e-12));
    }
    SECTION("rejects periods below 3") {
        CHECK_THROWS_AS(cycle_parameter(2), InvalidPeriod);
        CHECK_THROWS_AS(cycle_parameter(0), InvalidPeriod);
    }
    SECTION("n-step matrix power is scalar") {
        for (int n = 3; n <= 12; ++n) {
            const auto p = cycle_parameter(n);
            const auto power = pow(MobiusMatrix::forward(p), n);
            INFO("n=" << n << " u=" << p.u());
            CHECK(power.is_scalar(1e-12));
        }
    }
    SECTION("every starting point returns after n steps") {
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> unif(-4.0, 4.0);
        for (int n : {3, 4, 5, 8, 12}) {
            const auto p = cycle_parameter(n);
            for (int i = 0; i < 10; ++i) {
                const auto x0 = ProjectivePoint::from_real(unif(rng));
                CHECK(projective_distance(iterate_direct(p, x0, n), x0) < 1e-12);
            }
        }
    }
}
