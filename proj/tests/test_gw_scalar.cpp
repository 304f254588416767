#include "catch_amalgamated.hpp"
#include "support.hpp"

#include <random>

using namespace wolter;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Vec3 random_half_space_k(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    for (;;) {
        Vec3 k{g(rng), g(rng), std::abs(g(rng)) + 0.05};
        const double s = 0.5 + std::uniform_real_distribution<double>(0.0, 10.0)(rng);
        k = k * (s / norm(k));
        if (norm(cross(kDefaultReference, k)) > 1e-3 * norm(k)) return k;
    }
}

VectorMode random_transverse_mode(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    const Vec3 k = random_half_space_k(rng);
    const Vec3 khat = k / norm(k);
    auto project = [&](Vec3 v) { return v - khat * dot(v, khat); };
    return {k, project({g(rng), g(rng), g(rng)}), project({g(rng), g(rng), g(rng)}), kTwoPi};
}

double max_diff(const Vec3& a, const Vec3& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

}  // namespace

TEST_CASE("make_basis examples") {
    const auto b = make_basis({0, 0, 1});
    CHECK(max_diff(b.l1, {0, -1, 0}) < 1e-15);
    CHECK(max_diff(b.l2, {1, 0, 0}) < 1e-15);
    CHECK_THROWS_AS(make_basis({1, 0, 0}), DegenerateBasisError);
    CHECK_THROWS_AS(make_basis({0, 0, 0}), DegenerateBasisError);
    CHECK_THROWS_AS(make_basis({0, 0, 1}, {0, 0, 2}), DegenerateBasisError);
}

TEST_CASE("make_basis pentad over random wavevectors") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 k = random_half_space_k(rng);
        const auto b = make_basis(k);
        const Vec3 khat = k / norm(k);
        REQUIRE_THAT(dot(b.l1, b.l1), WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(dot(b.l2, b.l2), WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(dot(b.l1, b.l2), WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(dot(b.l1, khat), WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(dot(b.l2, khat), WithinAbs(0.0, 1e-12));
        // right-handed: l1 x l2 = k_hat
        REQUIRE(max_diff(cross(b.l1, b.l2), khat) < 1e-12);
        // complex form: L.L = 0, L*.L = 2
        const CVec3 L = b.L();
        REQUIRE(std::abs(dot(L, L)) < 1e-12);
        REQUIRE_THAT(norm2(L), WithinAbs(2.0, 1e-12));
    }
}

TEST_CASE("vector to scalar examples") {
    const VectorMode m{{0, 0, 1}, {1, 0, 0}, {0, 0, 0}, kTwoPi};
    const auto s = vector_to_scalar(std::span(&m, 1));
    REQUIRE(s.size() == 1);
    CHECK(std::abs(s[0].alpha - cplx{0.0, 1.0}) < 1e-15);
    CHECK(std::abs(s[0].beta) < 1e-15);

    const VectorMode bad{{0, 0, 1}, {0, 0, 1}, {0, 0, 0}, kTwoPi};
    CHECK_THROWS_AS(vector_to_scalar(std::span(&bad, 1)), InvalidModeError);
    const VectorMode down{{0, 0, -1}, {1, 0, 0}, {0, 0, 0}, kTwoPi};
    CHECK_THROWS_AS(vector_to_scalar(std::span(&down, 1)), InvalidModeError);
    const VectorMode grazing{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}, kTwoPi};
    CHECK_THROWS_AS(vector_to_scalar(std::span(&grazing, 1)), InvalidModeError);
    CHECK(vector_to_scalar({}).empty());
}

TEST_CASE("scalar to vector examples") {
    const ScalarMode s{{0, 0, 1}, {1.0, 0.0}, {0.0, 0.0}, kTwoPi};
    const auto v = scalar_to_vector(std::span(&s, 1));
    REQUIRE(v.size() == 1);
    CHECK(max_diff(v[0].a, {0, -1, 0}) < 1e-15);
    CHECK(max_diff(v[0].b, {0, 0, 0}) < 1e-15);
}

TEST_CASE("vector <-> scalar round trips") {
    std::mt19937_64 rng(202);
    std::vector<VectorMode> modes;
    for (int i = 0; i < 1000; ++i) modes.push_back(random_transverse_mode(rng));

    const auto scalar = vector_to_scalar(modes);
    const auto back = scalar_to_vector(scalar);
    REQUIRE(back.size() == modes.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const double scale = std::max(norm(modes[i].a), norm(modes[i].b));
        worst = std::max({worst, max_diff(back[i].a, modes[i].a) / scale, max_diff(back[i].b, modes[i].b) / scale});
    }
    CHECK(worst < 1e-12);

    const auto again = vector_to_scalar(back);
    for (std::size_t i = 0; i < scalar.size(); ++i) {
        REQUIRE(std::abs(again[i].alpha - scalar[i].alpha) < 1e-12 * (1.0 + std::abs(scalar[i].alpha)));
        REQUIRE(std::abs(again[i].beta - scalar[i].beta) < 1e-12 * (1.0 + std::abs(scalar[i].beta)));
    }
}

TEST_CASE("single plane wave densities") {
    const Vec3 k{0.0, 3.0, 4.0};
    const double omega = 5.0;  // |k| = omega
    const ScalarMode m{k, {1.0, 0.0}, {0.0, 1.0}, omega};  // cos + i sin = exp(i k.x)
    for (double t : {0.0, 0.37, 1.9}) {
        const Vec3 x{0.2, -0.4, 1.1};
        const auto s = eval_field(std::span(&m, 1), x, t);
        CHECK(std::abs(s.V - std::exp(kI * (dot(k, x) - omega * t))) < 1e-14);
        CHECK_THAT(s.A, WithinAbs(1.0, 1e-14));
        CHECK(max_diff(s.g, k * (omega * kInv4Pi)) < 1e-14);
        CHECK_THAT(s.w, WithinAbs((omega * omega + dot(k, k)) * kInv8Pi, 1e-13));
        CHECK(max_diff(velocity(s, omega), k / omega) < 1e-14);
    }
    CHECK_THROWS_AS(eval_field(std::span<const ScalarMode>{}, Vec3{}, 0.0), std::invalid_argument);
}

TEST_CASE("energy density carries the permittivity inside a dielectric") {
    const double n = 1.5;
    const double omega = kTwoPi;
    const ModeSum f{{Mode{{0.0, 0.0, n * omega}, 1.0, omega}}, n};
    const auto s = eval_field(f, Vec3{0, 0.3, -0.2}, 0.1);
    CHECK_THAT(s.w, WithinRel((n * n * omega * omega + n * n * omega * omega) * kInv8Pi, 1e-14));
    CHECK_THAT(s.g.z, WithinRel(omega * n * omega * kInv4Pi, 1e-14));
}

TEST_CASE("standing wave node") {
    const double omega = kTwoPi;
    const ModeSum f{{Mode{{0, 0, omega}, 1.0, omega}, Mode{{0, 0, -omega}, -1.0, omega}}, 1.0};
    const auto s = eval_field(f, Vec3{0.0, 0.4, 0.0}, 0.2);
    CHECK(s.A < 1e-15);
    CHECK_FALSE(s.phase_defined);
    CHECK(norm(s.g) < 1e-15);
    CHECK_THROWS_AS(phase_gradient(s), NodeError);
    CHECK_THROWS_AS(velocity(s, omega), NodeError);
}

TEST_CASE("monochromatic fields: g and w do not depend on time") {
    const Scenario sc = testing::default_wolter();
    for (const Vec3& x : {Vec3{0, 0.3, -0.7}, Vec3{0, -2.1, 0.4}, Vec3{0, 1.4, -1.9}}) {
        const auto ref = eval_field(sc, x, 0.0);
        for (int i = 1; i <= 10; ++i) {
            const auto s = eval_field(sc, x, 0.173 * i);
            REQUIRE(max_diff(s.g, ref.g) < 1e-12 * norm(ref.g) + 1e-15);
            REQUIRE_THAT(s.w, WithinRel(ref.w, 1e-12));
        }
    }
}

TEST_CASE("eikonal form matches the flux form") {
    const Scenario sc = testing::default_wolter();
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> uy(-3, 3), uz(-2, 2);
    for (int i = 0; i < 200; ++i) {
        const auto s = eval_field(sc, Vec3{0, uy(rng), uz(rng)}, 0.25);
        if (!s.phase_defined) continue;
        const Vec3 ge = eikonal_momentum(s, sc.wavenumber());
        REQUIRE(norm(ge - s.g) < 1e-8 * norm(s.g));
    }
}

TEST_CASE("synthetic vortex velocity") {
    // V = (y + iz) exp(-i omega t), k0 = 1: v is azimuthal with |v| = 1/rho
    const testing::PowerVortex f{1, kTwoPi, 1.0};
    for (double rho : {0.01, 0.1, 0.5, 2.0}) {
        for (double a : {0.0, 1.0, 2.5, 4.0}) {
            const Point2 p{rho * std::cos(a), rho * std::sin(a)};
            const Vec3 v = velocity(f, in_plane(p), 0.0);
            CHECK_THAT(std::hypot(v.y, v.z), WithinRel(1.0 / rho, 1e-12));
            CHECK(std::abs(v.y * p.y + v.z * p.z) < 1e-12);
            CHECK(v.z * p.y - v.y * p.z > 0.0);  // counterclockwise
        }
    }
}

TEST_CASE("continuity residual") {
    SECTION("plane wave satisfies it to rounding") {
        const ModeSum f{{Mode{{0, 0.6 * kTwoPi, 0.8 * kTwoPi}, 1.0, kTwoPi}}, 1.0};
        CHECK(continuity_residual(f, {0, 0.3, 0.1}, 0.0, 1e-3) < 1e-9);
    }
    SECTION("wolter scenario converges at second order on both sides") {
        const Scenario sc = testing::default_wolter();
        const std::vector<double> steps{1e-2, 5e-3, 2.5e-3};
        for (const Point2& p : {Point2{0.3, -0.6}, Point2{-1.7, -1.4}, Point2{0.8, 0.4}, Point2{2.2, 1.3}})
            CHECK(continuity_order(sc, p, 0.0, steps) >= 1.8);
    }
    SECTION("a dispersion-violating mode leaves a floor") {
        const ModeSum f{{Mode{{0, 0, 1.001 * kTwoPi}, 1.0, kTwoPi}, Mode{{0, 0.5, 2.0}, 0.3, kTwoPi}}, 1.0};
        const double r1 = continuity_residual(f, {0, 0.2, 0.3}, 0.0, 1e-2);
        const double r2 = continuity_residual(f, {0, 0.2, 0.3}, 0.0, 2.5e-3);
        CHECK(r2 > 1e-3);
        CHECK(r2 > 0.5 * r1);
    }
    CHECK_THROWS_AS(continuity_residual(testing::default_single(), {0, 0, -0.5}, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("energy density is nonnegative") {
    const Scenario sc = testing::default_wolter();
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> uy(-3, 3), uz(-2, 2), ut(0, 1);
    for (int i = 0; i < 500; ++i) REQUIRE(eval_field(sc, Vec3{0, uy(rng), uz(rng)}, ut(rng)).w >= 0.0);
}
