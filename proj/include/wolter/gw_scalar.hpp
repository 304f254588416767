/**
 * @file gw_scalar.hpp
 * @brief Complex-potential (hydrodynamic) representation of a charge-free
 * field: transverse vector modes <-> complex scalar modes, momentum and
 * energy densities, amplitude/phase split and the velocity field grad S.
 *
 * Conventions
 *  - Vector potential modes: A = a cos(k.x) + b sin(k.x), with k.a = k.b = 0.
 *  - Complex basis: l1 = n x k / |n x k|, l2 = k x l1 / |k x l1|, L = l1 + i l2.
 *  - Scalar modes: V = (alpha cos(k.x) + beta sin(k.x)) exp(-i omega t) with
 *    alpha = a.l1 + i a.l2 and beta = b.l1 + i b.l2.
 *  - g = -(1/8pi) [V_t* grad V + V_t grad V*]
 *  - w = (1/8pi) [eps |V_t|^2 + |grad V|^2], eps = n^2 of the local medium
 *    (eps = 1 in vacuum). This is the form that satisfies dw/dt + div g = 0
 *    for k.k = eps omega^2.
 */
#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "wolter/field.hpp"
#include "wolter/types.hpp"

namespace wolter {

inline constexpr double kInv8Pi = 1.0 / (8.0 * kPi);
inline constexpr double kInv4Pi = 1.0 / (4.0 * kPi);

/// Default fixed reference vector n, perpendicular to the y-z plane of
/// incidence and therefore valid for every in-plane wavevector.
inline constexpr Vec3 kDefaultReference{1.0, 0.0, 0.0};

struct VectorMode {
    Vec3 k{};
    Vec3 a{};
    Vec3 b{};
    double omega = kTwoPi;
};

struct ComplexBasis {
    Vec3 l1{};
    Vec3 l2{};

    CVec3 L() const { return CVec3::from_real(l1) + CVec3::from_real(l2) * kI; }
};

struct ScalarMode {
    Vec3 k{};
    cplx alpha{};
    cplx beta{};
    double omega = kTwoPi;
};

/// Pointwise values derived from the local jet.
struct FieldSample {
    cplx V{};
    CVec3 grad_V{};
    cplx dV_dt{};
    double A = 0.0;
    double B = 0.0;
    /// False where A is at or below the node threshold; B is then 0 and
    /// carries no meaning.
    bool phase_defined = false;
    Vec3 g{};
    double w = 0.0;
};

// Basis and vector <-> scalar maps ---------------------------------------------

inline ComplexBasis make_basis(const Vec3& k, const Vec3& n = kDefaultReference) {
    const double nk = norm(k);
    if (!(nk > 0.0)) throw DegenerateBasisError("make_basis: k must be nonzero");
    const Vec3 nxk = cross(n, k);
    const double m = norm(nxk);
    if (!(m > 1e-10 * norm(n) * nk)) throw DegenerateBasisError("make_basis: reference vector n is parallel to k");
    ComplexBasis basis;
    basis.l1 = nxk / m;
    const Vec3 kxl1 = cross(k, basis.l1);
    basis.l2 = kxl1 / norm(kxl1);
    return basis;
}

namespace detail {

inline void require_half_space(const Vec3& k, const char* who) {
    if (!(k.z > 0.0)) throw InvalidModeError(std::string(who) + ": modes must have k_z > 0");
}

}  // namespace detail

inline std::vector<ScalarMode> vector_to_scalar(std::span<const VectorMode> modes, const Vec3& n = kDefaultReference) {
    std::vector<ScalarMode> out;
    out.reserve(modes.size());
    for (const auto& m : modes) {
        detail::require_half_space(m.k, "vector_to_scalar");
        const double kn = norm(m.k);
        const double size = std::max({norm(m.a), norm(m.b), 1e-300});
        if (std::abs(dot(m.k, m.a)) > 1e-9 * kn * size || std::abs(dot(m.k, m.b)) > 1e-9 * kn * size)
            throw InvalidModeError("vector_to_scalar: mode amplitudes are not transverse to k");
        const ComplexBasis basis = make_basis(m.k, n);
        out.push_back({m.k, {dot(m.a, basis.l1), dot(m.a, basis.l2)}, {dot(m.b, basis.l1), dot(m.b, basis.l2)}, m.omega});
    }
    return out;
}

inline std::vector<VectorMode> scalar_to_vector(std::span<const ScalarMode> modes, const Vec3& n = kDefaultReference) {
    std::vector<VectorMode> out;
    out.reserve(modes.size());
    for (const auto& m : modes) {
        detail::require_half_space(m.k, "scalar_to_vector");
        const ComplexBasis basis = make_basis(m.k, n);
        out.push_back({m.k, basis.l1 * m.alpha.real() + basis.l2 * m.alpha.imag(),
                       basis.l1 * m.beta.real() + basis.l2 * m.beta.imag(), m.omega});
    }
    return out;
}

/// Field given by a list of complex scalar modes (vacuum).
struct ScalarModeField {
    std::vector<ScalarMode> modes;

    FieldJet jet(const Vec3& x, double t) const {
        if (modes.empty()) throw std::invalid_argument("ScalarModeField: empty mode list");
        FieldJet acc;
        for (const auto& m : modes) {
            const double phi = dot(m.k, x);
            const double c = std::cos(phi);
            const double s = std::sin(phi);
            const cplx e = std::exp(-kI * m.omega * t);
            const cplx v = (m.alpha * c + m.beta * s) * e;
            const cplx dv = (m.beta * c - m.alpha * s) * e;
            const std::array<double, 3> kk{m.k.x, m.k.y, m.k.z};
            FieldJet j;
            j.value = v;
            j.grad = CVec3::from_real(m.k) * dv;
            j.dt = -kI * m.omega * v;
            j.grad_dt = j.grad * (-kI * m.omega);
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b) j.hessian[a][b] = -kk[a] * kk[b] * v;
            acc += j;
        }
        return acc;
    }

    double amplitude_scale() const {
        double s = 0.0;
        for (const auto& m : modes) s += std::abs(m.alpha) + std::abs(m.beta);
        return s;
    }

    double wavenumber() const {
        if (modes.empty()) throw std::invalid_argument("ScalarModeField: empty mode list");
        return modes.front().omega;
    }
};

static_assert(Field<ScalarModeField>);

// Densities --------------------------------------------------------------------

inline Vec3 momentum_density(const FieldJet& j) {
    // -(1/8pi)(V_t* grad V + c.c.) = -(1/4pi) Re(V_t* grad V)
    return (j.grad * std::conj(j.dt)).real() * (-kInv4Pi);
}

inline double energy_density(const FieldJet& j) {
    return kInv8Pi * (j.permittivity * std::norm(j.dt) + norm2(j.grad));
}

/// Node threshold used throughout: |V| <= 1e-12 * amplitude scale.
inline constexpr double kNodeThreshold = 1e-12;

inline FieldSample sample_from_jet(const FieldJet& j, double amplitude_scale) {
    FieldSample s;
    s.V = j.value;
    s.grad_V = j.grad;
    s.dV_dt = j.dt;
    s.A = std::abs(j.value);
    s.phase_defined = s.A > kNodeThreshold * amplitude_scale;
    s.B = s.phase_defined ? std::arg(j.value) : 0.0;
    s.g = momentum_density(j);
    s.w = energy_density(j);
    return s;
}

template <Field F>
FieldSample eval_field(const F& field, const Vec3& x, double t) {
    return sample_from_jet(field.jet(x, t), field.amplitude_scale());
}

inline FieldSample eval_field(std::span<const ScalarMode> modes, const Vec3& x, double t) {
    return eval_field(ScalarModeField{{modes.begin(), modes.end()}}, x, t);
}

/// grad B = Im(V* grad V) / |V|^2.
inline Vec3 phase_gradient(const FieldSample& s) {
    if (!s.phase_defined) throw NodeError("phase gradient undefined at a node (A below threshold)");
    return (s.grad_V * std::conj(s.V)).imag() / (s.A * s.A);
}

/// Momentum density from the eikonal form (k0^2/4pi) A^2 grad S with
/// grad S = grad B / k0. Independent of momentum_density(): it never uses
/// the time derivative of V.
inline Vec3 eikonal_momentum(const FieldSample& s, double k0) {
    const Vec3 grad_S = phase_gradient(s) / k0;
    return grad_S * (k0 * k0 * kInv4Pi * s.A * s.A);
}

/// Velocity field v = grad S.
inline Vec3 velocity(const FieldSample& s, double k0) { return phase_gradient(s) / k0; }

template <Field F>
Vec3 velocity(const F& field, const Vec3& x, double t) {
    return velocity(eval_field(field, x, t), field.wavenumber());
}

/// |dw/dt + div g| by central differences of step h in t and in each
/// spatial direction.
template <Field F>
double continuity_residual(const F& field, const Vec3& x, double t, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("continuity_residual: step must be positive");
    auto w_at = [&](const Vec3& p, double tt) { return energy_density(field.jet(p, tt)); };
    auto g_at = [&](const Vec3& p) { return momentum_density(field.jet(p, t)); };
    const double dw_dt = (w_at(x, t + h) - w_at(x, t - h)) / (2.0 * h);
    const Vec3 ex{h, 0.0, 0.0};
    const Vec3 ey{0.0, h, 0.0};
    const Vec3 ez{0.0, 0.0, h};
    const double div = (g_at(x + ex).x - g_at(x - ex).x + g_at(x + ey).y - g_at(x - ey).y + g_at(x + ez).z -
                        g_at(x - ez).z) /
                       (2.0 * h);
    return std::abs(dw_dt + div);
}

}  // namespace wolter
