#include "catch_amalgamated.hpp"
#include "support.hpp"

#include <random>

using namespace wolter;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testing::deg;

namespace {
const Interface kGlass(1.5, 1.0);
}

TEST_CASE("interface validation and critical angle") {
    CHECK_THAT(kGlass.critical_angle(), WithinAbs(testing::oracle::kCriticalAngle, 1e-15));
    CHECK_THROWS_AS(Interface(1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(Interface(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Interface(-1.5, 1.0), std::invalid_argument);
}

TEST_CASE("fresnel reflection examples") {
    const double tc = kGlass.critical_angle();
    SECTION("at the critical angle r = 1") {
        const cplx r = fresnel_reflection(kGlass, tc);
        CHECK_THAT(r.real(), WithinAbs(1.0, 1e-7));
        CHECK_THAT(r.imag(), WithinAbs(0.0, 1e-7));
    }
    SECTION("grazing incidence tends to -1") {
        const cplx r = fresnel_reflection(kGlass, kPi / 2 - 1e-9);
        CHECK_THAT(r.real(), WithinAbs(-1.0, 1e-8));
        CHECK_THAT(std::abs(r), WithinAbs(1.0, 1e-12));
    }
    SECTION("50 degrees: unit modulus, frozen phase") {
        const cplx r = fresnel_reflection(kGlass, deg(50));
        CHECK_THAT(std::abs(r), WithinAbs(1.0, 1e-12));
        CHECK_THAT(std::arg(r), WithinAbs(testing::oracle::kPhase50, 1e-14));
    }
    SECTION("below critical: real, partial") {
        const cplx r = fresnel_reflection(kGlass, deg(30));
        CHECK(r.imag() == 0.0);
        CHECK(std::abs(r) < 1.0);
        // normal incidence (n1 - n2) / (n1 + n2)
        CHECK_THAT(fresnel_reflection(kGlass, 0.0).real(), WithinAbs(0.2, 1e-15));
    }
    SECTION("out of range") {
        CHECK_THROWS_AS(fresnel_reflection(kGlass, -0.1), DomainError);
        CHECK_THROWS_AS(fresnel_reflection(kGlass, kPi / 2), DomainError);
        CHECK_THROWS_AS(fresnel_reflection(kGlass, std::nan("")), DomainError);
    }
}

TEST_CASE("fresnel phase: unimodular, monotone, continuous above critical") {
    const double tc = kGlass.critical_angle();
    const int n = 1000;
    double prev = 0.0;
    for (int i = 1; i < n; ++i) {
        const double th = tc + (kPi / 2 - tc) * i / n;
        const cplx r = fresnel_reflection(kGlass, th);
        REQUIRE_THAT(std::abs(r), WithinAbs(1.0, 1e-12));
        const double ph = std::arg(r);
        REQUIRE(ph < prev);
        REQUIRE(ph > -kPi);
        REQUIRE(prev - ph < 0.2);
        prev = ph;
    }
}

TEST_CASE("evanescent decay") {
    const double tc = kGlass.critical_angle();
    CHECK_THAT(evanescent_decay(kGlass, deg(45), 1.0), WithinAbs(testing::oracle::kKappa45, 1e-13));
    CHECK_THAT(evanescent_decay(kGlass, kPi / 2, 1.0), WithinAbs(testing::oracle::kKappa90, 1e-13));
    CHECK(evanescent_decay(kGlass, tc, 1.0) == 0.0);
    CHECK_THROWS_AS(evanescent_decay(kGlass, deg(30), 1.0), DomainError);
    CHECK_THROWS_AS(evanescent_decay(kGlass, tc - 1e-6, 1.0), DomainError);
    // penetration depth is a fraction of a wavelength
    const double depth = 1.0 / evanescent_decay(kGlass, deg(45), 1.0);
    CHECK(depth > 0.1);
    CHECK(depth < 1.0);
    // scales as 1/lambda0
    CHECK_THAT(evanescent_decay(kGlass, deg(45), 2.0), WithinRel(testing::oracle::kKappa45 / 2.0, 1e-14));
}

namespace {

void check_scenario_invariants(const Scenario& sc) {
    const double omega = sc.omega();
    for (const auto& m : sc.dense_modes) {
        CHECK(dispersion_residual(m, sc.interface.n1()) < 1e-12);
        CHECK(m.omega == omega);
        CHECK(m.k.x == cplx{0.0});
    }
    for (const auto& m : sc.rare_modes) {
        CHECK(dispersion_residual(m, sc.interface.n2()) < 1e-12);
        CHECK(m.evanescent());
        CHECK(m.k.z.imag() > 0.0);
        CHECK(m.k.z.real() == 0.0);
    }
    for (const auto& l : sc.links) {
        const Mode& ref = sc.dense_modes[l.reflected];
        const Mode& tr = sc.rare_modes[l.transmitted];
        CHECK(ref.k.y == tr.k.y);
        if (l.incident) {
            const Mode& inc = sc.dense_modes[*l.incident];
            CHECK(inc.k.y == ref.k.y);
            CHECK(inc.k.z == -ref.k.z);
            CHECK_THAT(std::abs(ref.amplitude), WithinRel(std::abs(inc.amplitude), 1e-12));
        }
    }
}

}  // namespace

TEST_CASE("single wave scenario") {
    const Scenario sc = testing::default_single();
    REQUIRE(sc.dense_modes.size() == 2);
    REQUIRE(sc.rare_modes.size() == 1);
    REQUIRE(sc.links.size() == 1);
    check_scenario_invariants(sc);
    CHECK_THAT(sc.rare_modes[0].k.z.imag(), WithinAbs(testing::oracle::kKappa45, 1e-12));
    CHECK_THROWS_AS(build_single_wave(kGlass, deg(30), 1.0), DomainError);
    CHECK_THROWS_AS(build_single_wave(kGlass, deg(45), 0.0), DomainError);

    // V is continuous across the interface
    for (double y : {-1.3, 0.0, 0.7, 2.9}) {
        const auto below = sc.dense_field().jet({0, y, 0.0}, 0.3);
        const auto above = sc.rare_field().jet({0, y, 0.0}, 0.3);
        CHECK(std::abs(below.value - above.value) < 1e-12);
        CHECK(std::abs(below.grad.z - above.grad.z) < 1e-10);
    }
}

TEST_CASE("wolter scenario") {
    const Scenario sc = testing::default_wolter();
    REQUIRE(sc.dense_modes.size() == 4);
    REQUIRE(sc.rare_modes.size() == 2);
    REQUIRE(sc.links.size() == 2);
    check_scenario_invariants(sc);
    CHECK_THROWS_AS(build_wolter_scenario(kGlass, deg(42), deg(2), 1.0), DomainError);

    SECTION("delta = 0 doubles the single wave") {
        const Scenario w = build_wolter_scenario(kGlass, deg(50), 0.0, 1.0);
        const Scenario s = build_single_wave(kGlass, deg(50), 1.0);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int i = 0; i < 50; ++i) {
            const Vec3 x{0.0, u(rng), u(rng)};
            const double t = u(rng);
            CHECK(std::abs(w.jet(x, t).value - 2.0 * s.jet(x, t).value) < 1e-12);
        }
    }
}

TEST_CASE("braunbek scenario") {
    const Scenario sc = build_braunbek_scenario(kGlass, deg(45), deg(1), 1.0);
    REQUIRE(sc.dense_modes.size() == 3);
    REQUIRE(sc.rare_modes.size() == 2);
    REQUIRE(sc.links.size() == 2);
    CHECK_FALSE(sc.links[1].incident.has_value());
    check_scenario_invariants(sc);

    const Scenario s0 = build_braunbek_scenario(kGlass, deg(45), 0.0, 1.0);
    const Scenario single = testing::default_single();
    REQUIRE(s0.dense_modes.size() == 2);
    for (double z : {-1.0, -0.3, 0.4}) {
        const Vec3 x{0, 0.37, z};
        CHECK(std::abs(s0.jet(x, 0.1).value - single.jet(x, 0.1).value) < 1e-14);
    }
}

TEST_CASE("goos-haenchen shift") {
    const double tc = kGlass.critical_angle();
    double prev = std::numeric_limits<double>::infinity();
    // D = 2 tan(theta) / (k0 q) falls from the critical angle to a minimum
    // at tan(theta) = sqrt(2) (54.7 degrees) and grows again toward grazing
    for (double th = tc + 0.01; th < deg(54.5); th += 0.01) {
        const double d = gh_shift(kGlass, th, 1.0);
        REQUIRE(d > 0.0);
        REQUIRE(d < prev);
        prev = d;
    }
    CHECK(gh_shift(kGlass, deg(80), 1.0) > gh_shift(kGlass, deg(70), 1.0));
    // order-of-magnitude: a fraction of a wavelength to tens of wavelengths
    for (double th : {43.0, 45.0, 60.0}) {
        const double d = gh_shift(kGlass, deg(th), 1.0);
        CHECK(d > 0.1);
        CHECK(d < 100.0);
    }
    // finite-difference step refinement leaves the value unchanged
    const double a = gh_shift(kGlass, deg(45), 1.0, 1e-5);
    const double b = gh_shift(kGlass, deg(45), 1.0, 5e-6);
    CHECK_THAT(a, WithinRel(b, 1e-6));
    // scales with lambda0
    CHECK_THAT(gh_shift(kGlass, deg(45), 3.0), WithinRel(3.0 * gh_shift(kGlass, deg(45), 1.0), 1e-6));

    CHECK_THROWS_AS(gh_shift(kGlass, tc, 1.0), DomainError);
    CHECK_THROWS_AS(gh_shift(kGlass, kPi / 2, 1.0), DomainError);
    CHECK_THROWS_AS(gh_shift(kGlass, deg(30), 1.0), DomainError);
}

TEST_CASE("goos-haenchen shift against the closed-form derivative") {
    // D = 2 tan(theta) / (k0 q) with q = sqrt(n1^2 sin^2 - n2^2), the
    // derivative of -2 atan(q / (n1 cos)) with respect to k_y.
    for (double th : {43.0, 50.0, 70.0}) {
        const double t = deg(th);
        const double s = std::sin(t);
        const double q = std::sqrt(1.5 * 1.5 * s * s - 1.0);
        const double expected = 2.0 * std::tan(t) / (kTwoPi * q);
        CHECK_THAT(gh_shift(kGlass, t, 1.0), WithinRel(expected, 1e-6));
    }
}
