// Synthetic fields with hand-written jets, and frozen reference values.
#pragma once

#include <cmath>
#include <complex>

#include "wolter/cli.hpp"
#include "wolter/wolter.hpp"

namespace testing {

using wolter::cplx;
using wolter::FieldJet;
using wolter::kI;
using wolter::kTwoPi;
using wolter::Vec3;

// High-precision values computed offline (50 digits) and frozen here.
namespace oracle {
inline constexpr double kCriticalAngle = 0.72972765622696636345;   // asin(1/1.5)
inline constexpr double kPhase50 = -1.0616485687527151686;         // arg r(50 deg)
inline constexpr double kKappa45 = 2.2214414690791831235;          // k0 sqrt(1.5^2 sin^2 45 - 1)
inline constexpr double kKappa90 = 7.0248147310407263932;          // k0 sqrt(1.5^2 - 1)
}  // namespace oracle

/// V = (y + iz)^m exp(-i omega t); node of winding m at the origin.
struct PowerVortex {
    int m = 1;
    double omega = kTwoPi;
    double k0 = kTwoPi;

    FieldJet jet(const Vec3& x, double t) const {
        const cplx u{x.y, x.z};
        const cplx e = std::exp(-kI * omega * t);
        const cplx f = std::pow(u, m);
        const cplx f1 = static_cast<double>(m) * (m >= 1 ? std::pow(u, m - 1) : cplx{});
        const cplx f2 = m >= 2 ? static_cast<double>(m * (m - 1)) * std::pow(u, m - 2) : cplx{};
        FieldJet j;
        j.value = f * e;
        j.grad = {0.0, f1 * e, kI * f1 * e};
        j.dt = -kI * omega * j.value;
        j.grad_dt = j.grad * (-kI * omega);
        j.hessian[1][1] = f2 * e;
        j.hessian[1][2] = j.hessian[2][1] = kI * f2 * e;
        j.hessian[2][2] = -f2 * e;
        return j;
    }
    double amplitude_scale() const { return 1.0; }
    double wavenumber() const { return k0; }
};

/// V = (y - a + i(z - b)) (y - c + s i(z - d)): two nodes, windings +1 and s.
struct VortexPair {
    wolter::Point2 p1{-0.5, 0.0};
    wolter::Point2 p2{0.5, 0.0};
    double s = 1.0;

    FieldJet jet(const Vec3& x, double t) const {
        const cplx u{x.y - p1.y, x.z - p1.z};
        const cplx v{x.y - p2.y, s * (x.z - p2.z)};
        const cplx e = std::exp(-kI * kTwoPi * t);
        FieldJet j;
        j.value = u * v * e;
        j.grad = {0.0, (u + v) * e, (kI * v + kI * s * u) * e};
        j.dt = -kI * kTwoPi * j.value;
        j.grad_dt = j.grad * (-kI * kTwoPi);
        j.hessian[1][1] = 2.0 * e;
        j.hessian[1][2] = j.hessian[2][1] = kI * (1.0 + s) * e;
        j.hessian[2][2] = -2.0 * s * e;
        return j;
    }
    double amplitude_scale() const { return 1.0; }
    double wavenumber() const { return kTwoPi; }
};

/// V = exp(i c (y^2 - z^2) / 2 - i omega t); g = (omega c / 4pi) (y, -z),
/// a saddle of g at the origin with no node anywhere.
struct Chirp {
    double c = 2.0;

    FieldJet jet(const Vec3& x, double t) const {
        const double w = kTwoPi;
        const cplx v = std::exp(kI * (c * (x.y * x.y - x.z * x.z) / 2.0 - w * t));
        const cplx py = kI * c * x.y;
        const cplx pz = -kI * c * x.z;
        FieldJet j;
        j.value = v;
        j.grad = {0.0, py * v, pz * v};
        j.dt = -kI * w * v;
        j.grad_dt = j.grad * (-kI * w);
        j.hessian[1][1] = (kI * c + py * py) * v;
        j.hessian[1][2] = j.hessian[2][1] = py * pz * v;
        j.hessian[2][2] = (-kI * c + pz * pz) * v;
        return j;
    }
    double amplitude_scale() const { return 1.0; }
    double wavenumber() const { return kTwoPi; }
};

static_assert(wolter::Field<PowerVortex>);
static_assert(wolter::Field<VortexPair>);
static_assert(wolter::Field<Chirp>);

inline wolter::Scenario default_wolter() {
    return wolter::build_wolter_scenario(wolter::Interface(1.5, 1.0), 45.0 * wolter::kPi / 180.0,
                                         1.0 * wolter::kPi / 180.0, 1.0, {cplx{1.0}, cplx{1.0}});
}

inline wolter::Scenario default_single() {
    return wolter::build_single_wave(wolter::Interface(1.5, 1.0), 45.0 * wolter::kPi / 180.0, 1.0);
}

inline double deg(double d) { return d * wolter::kPi / 180.0; }

}  // namespace testing
