/**
 * @file field.hpp
 * @brief Complex scalar fields built from plane/evanescent modes, and the
 * Field concept every analysis routine is written against.
 *
 * A field is anything that can report its local jet: V, grad V, dV/dt,
 * grad dV/dt and the spatial Hessian at a point and time. Mode sums compute
 * the jet analytically; synthetic test fields can supply it by hand.
 */
#pragma once

#include <array>
#include <concepts>
#include <span>
#include <stdexcept>
#include <vector>

#include "wolter/types.hpp"

namespace wolter {

/// Local derivatives of V at one point and time.
struct FieldJet {
    cplx value{};
    CVec3 grad{};
    cplx dt{};
    CVec3 grad_dt{};
    std::array<std::array<cplx, 3>, 3> hessian{};
    /// Relative permittivity n^2 of the medium at the point (1 in vacuum).
    double permittivity = 1.0;

    FieldJet& operator+=(const FieldJet& o) {
        value += o.value;
        grad += o.grad;
        dt += o.dt;
        grad_dt += o.grad_dt;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) hessian[i][j] += o.hessian[i][j];
        return *this;
    }
};

/// A complex scalar field with analytic derivatives.
///
/// amplitude_scale() is the reference magnitude used for node thresholds;
/// wavenumber() is the vacuum wavenumber k0 = omega (c = 1) used to turn
/// phase gradients into the eikonal gradient grad S = grad B / k0.
template <class F>
concept Field = requires(const F& f, const Vec3& x, double t) {
    { f.jet(x, t) } -> std::convertible_to<FieldJet>;
    { f.amplitude_scale() } -> std::convertible_to<double>;
    { f.wavenumber() } -> std::convertible_to<double>;
};

/// One plane or evanescent wave amplitude * exp(i(k.x - omega t)).
struct Mode {
    CVec3 k{};
    cplx amplitude{1.0, 0.0};
    double omega = kTwoPi;

    FieldJet jet(const Vec3& x, double t) const {
        const cplx e = amplitude * std::exp(kI * (dot(k, x) - omega * t));
        const std::array<cplx, 3> kk{k.x, k.y, k.z};
        FieldJet j;
        j.value = e;
        j.grad = k * (kI * e);
        j.dt = -kI * omega * e;
        j.grad_dt = k * (omega * e);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) j.hessian[a][b] = -kk[a] * kk[b] * e;
        return j;
    }

    /// k.k (bilinear, no conjugation).
    cplx k_squared() const { return dot(k, k); }
    bool evanescent() const { return k.x.imag() != 0.0 || k.y.imag() != 0.0 || k.z.imag() != 0.0; }
};

/// Sum of modes living in a homogeneous medium of refractive index n.
struct ModeSum {
    std::vector<Mode> modes;
    double refractive_index = 1.0;

    FieldJet jet(const Vec3& x, double t) const {
        if (modes.empty()) throw std::invalid_argument("ModeSum: empty mode list");
        FieldJet acc;
        for (const auto& m : modes) acc += m.jet(x, t);
        acc.permittivity = refractive_index * refractive_index;
        return acc;
    }

    double amplitude_scale() const {
        double s = 0.0;
        for (const auto& m : modes) s += std::abs(m.amplitude);
        return s;
    }

    double wavenumber() const {
        if (modes.empty()) throw std::invalid_argument("ModeSum: empty mode list");
        return modes.front().omega;
    }
};

static_assert(Field<ModeSum>);

}  // namespace wolter
