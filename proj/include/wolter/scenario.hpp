/**
 * @file scenario.hpp
 * @brief Total-reflection field configurations at a planar dielectric
 * interface.
 *
 * Geometry: the interface is the plane z = 0, the denser medium fills z < 0
 * and the rarer medium z > 0. The plane of incidence is y-z (k_x = 0), with
 * y along the surface. Units: c = 1, lengths in vacuum wavelengths when
 * lambda0 = 1, so omega = k0 = 2 pi / lambda0. All waves are s-polarized,
 * which makes the physical field a true complex scalar.
 */
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wolter/field.hpp"
#include "wolter/types.hpp"

namespace wolter {

struct Medium {
    double refractive_index = 1.0;
};

/// Dense (incidence) medium below z = 0, rare medium above.
struct Interface {
    Medium dense{1.5};
    Medium rare{1.0};

    Interface() = default;
    Interface(double n_dense, double n_rare) : dense{n_dense}, rare{n_rare} {
        if (!(n_dense > 0.0) || !(n_rare > 0.0))
            throw std::invalid_argument("Interface: refractive indices must be positive");
        if (!(n_dense > n_rare))
            throw std::invalid_argument("Interface: total reflection needs n_dense > n_rare");
    }

    double n1() const { return dense.refractive_index; }
    double n2() const { return rare.refractive_index; }
    double critical_angle() const { return std::asin(n2() / n1()); }
};

/// Indices of one incident wave and the partners it generates. The incident
/// index is empty when the incident wave was suppressed (three-wave case).
struct ModeLink {
    std::optional<std::size_t> incident;
    std::size_t reflected = 0;
    std::size_t transmitted = 0;
};

/// Monochromatic field on both sides of the interface. Satisfies Field:
/// evaluation dispatches on the sign of z (z < 0 dense, z >= 0 rare).
struct Scenario {
    Interface interface;
    double lambda0 = 1.0;
    std::vector<Mode> dense_modes;
    std::vector<Mode> rare_modes;
    std::vector<ModeLink> links;
    std::string label;

    double omega() const { return kTwoPi / lambda0; }
    double wavenumber() const { return omega(); }

    FieldJet jet(const Vec3& x, double t) const {
        const bool dense = x.z < 0.0;
        const auto& modes = dense ? dense_modes : rare_modes;
        if (modes.empty()) throw std::invalid_argument("Scenario: empty mode list");
        FieldJet acc;
        for (const auto& m : modes) acc += m.jet(x, t);
        const double n = dense ? interface.n1() : interface.n2();
        acc.permittivity = n * n;
        return acc;
    }

    /// Sum of dense-side amplitude magnitudes; the reference scale for node
    /// thresholds.
    double amplitude_scale() const {
        double s = 0.0;
        for (const auto& m : dense_modes) s += std::abs(m.amplitude);
        return s;
    }

    ModeSum dense_field() const { return {dense_modes, interface.n1()}; }
    ModeSum rare_field() const { return {rare_modes, interface.n2()}; }
};

static_assert(Field<Scenario>);

// Fresnel / evanescent plumbing -----------------------------------------------

/// s-polarization reflection coefficient at incidence angle theta (radians)
/// in the dense medium. Real below the critical angle, unimodular above it.
inline cplx fresnel_reflection(const Interface& iface, double theta) {
    if (!(theta >= 0.0 && theta < kPi / 2))
        throw DomainError("fresnel_reflection: theta must lie in [0, pi/2), got " + std::to_string(theta));
    const double n1 = iface.n1();
    const double n2 = iface.n2();
    const double s = std::sin(theta);
    const double c1 = n1 * std::cos(theta);
    const double tangential2 = n1 * n1 * s * s;
    if (tangential2 <= n2 * n2) {
        const double c2 = std::sqrt(n2 * n2 - tangential2);
        return {(c1 - c2) / (c1 + c2), 0.0};
    }
    const double q = std::sqrt(tangential2 - n2 * n2);
    return cplx{c1, -q} / cplx{c1, q};
}

/// Amplitude decay constant of the transmitted field, in 1/length.
/// theta equal to the critical angle (within 1e-12 rad) gives 0.
inline double evanescent_decay(const Interface& iface, double theta, double lambda0) {
    const double tc = iface.critical_angle();
    if (std::abs(theta - tc) <= 1e-12) return 0.0;
    if (!(theta > tc && theta <= kPi / 2))
        throw DomainError("evanescent_decay: theta must exceed the critical angle " + std::to_string(tc) +
                          " rad (and not exceed pi/2)");
    if (!(lambda0 > 0.0)) throw DomainError("evanescent_decay: lambda0 must be positive");
    const double n1 = iface.n1();
    const double n2 = iface.n2();
    const double s = std::sin(theta);
    return (kTwoPi / lambda0) * std::sqrt(n1 * n1 * s * s - n2 * n2);
}

namespace detail {

inline void require_total_reflection(const Interface& iface, double theta, const char* who) {
    const double tc = iface.critical_angle();
    if (!(theta > tc && theta < kPi / 2))
        throw DomainError(std::string(who) + ": angle " + std::to_string(theta) +
                          " rad is not in the total-reflection range (" + std::to_string(tc) + ", pi/2)");
}

/// Appends incident, reflected and transmitted partners of one unit-scaled
/// incident wave and records the link.
inline void add_reflected_triple(Scenario& sc, double theta, cplx amplitude) {
    const double k0 = kTwoPi / sc.lambda0;
    const double n1 = sc.interface.n1();
    const double ky = n1 * k0 * std::sin(theta);
    const double kz = n1 * k0 * std::cos(theta);
    const double kappa = evanescent_decay(sc.interface, theta, sc.lambda0);
    const cplx r = fresnel_reflection(sc.interface, theta);
    const double omega = k0;

    ModeLink link;
    link.incident = sc.dense_modes.size();
    sc.dense_modes.push_back({{0.0, ky, kz}, amplitude, omega});
    link.reflected = sc.dense_modes.size();
    sc.dense_modes.push_back({{0.0, ky, -kz}, r * amplitude, omega});
    link.transmitted = sc.rare_modes.size();
    sc.rare_modes.push_back({{0.0, ky, cplx{0.0, kappa}}, (1.0 + r) * amplitude, omega});
    sc.links.push_back(link);
}

}  // namespace detail

/// One incident plane wave: incident + reflected on the dense side, one
/// evanescent wave on the rare side.
inline Scenario build_single_wave(const Interface& iface, double theta, double lambda0, cplx amplitude = 1.0) {
    detail::require_total_reflection(iface, theta, "build_single_wave");
    if (!(lambda0 > 0.0)) throw DomainError("build_single_wave: lambda0 must be positive");
    Scenario sc;
    sc.interface = iface;
    sc.lambda0 = lambda0;
    sc.label = "single";
    detail::add_reflected_triple(sc, theta, amplitude);
    return sc;
}

/// Two incident waves at theta_mean -/+ delta_theta/2 and their reflected and
/// transmitted partners (four dense waves, two evanescent waves).
inline Scenario build_wolter_scenario(const Interface& iface, double theta_mean, double delta_theta, double lambda0,
                                      std::array<cplx, 2> amplitudes = {cplx{1.0}, cplx{1.0}}) {
    const double t1 = theta_mean - 0.5 * delta_theta;
    const double t2 = theta_mean + 0.5 * delta_theta;
    detail::require_total_reflection(iface, t1, "build_wolter_scenario");
    detail::require_total_reflection(iface, t2, "build_wolter_scenario");
    if (!(lambda0 > 0.0)) throw DomainError("build_wolter_scenario: lambda0 must be positive");
    Scenario sc;
    sc.interface = iface;
    sc.lambda0 = lambda0;
    sc.label = "wolter";
    detail::add_reflected_triple(sc, t1, amplitudes[0]);
    detail::add_reflected_triple(sc, t2, amplitudes[1]);
    return sc;
}

/// Three-wave field: the Wolter construction with the second incident wave
/// removed after its reflected and transmitted partners were computed.
/// delta_theta = 0 makes the two waves coincide and yields the single-wave
/// scenario. The rare-side field keeps both evanescent waves, so V is not
/// continuous across z = 0 in this configuration.
inline Scenario build_braunbek_scenario(const Interface& iface, double theta_mean, double delta_theta, double lambda0,
                                        std::array<cplx, 2> amplitudes = {cplx{1.0}, cplx{1.0}}) {
    if (delta_theta == 0.0) {
        Scenario sc = build_single_wave(iface, theta_mean, lambda0, amplitudes[0]);
        sc.label = "braunbek";
        return sc;
    }
    Scenario sc = build_wolter_scenario(iface, theta_mean, delta_theta, lambda0, amplitudes);
    sc.label = "braunbek";
    const std::size_t removed = *sc.links[1].incident;
    sc.dense_modes.erase(sc.dense_modes.begin() + static_cast<std::ptrdiff_t>(removed));
    sc.links[1].incident.reset();
    for (auto& l : sc.links) {
        if (l.incident && *l.incident > removed) --*l.incident;
        if (l.reflected > removed) --l.reflected;
    }
    return sc;
}

/// Longitudinal (Goos-Haenchen) shift from the stationary-phase estimate
/// D = -d phi / d k_y, differentiated by central differences in the
/// tangential wavenumber with step relative_step * k0.
inline double gh_shift(const Interface& iface, double theta, double lambda0, double relative_step = 1e-6) {
    const double tc = iface.critical_angle();
    if (!(theta > tc + 1e-6 && theta < kPi / 2 - 1e-6))
        throw DomainError("gh_shift: theta must lie strictly inside (critical angle, pi/2), 1e-6 rad away from both");
    if (!(lambda0 > 0.0)) throw DomainError("gh_shift: lambda0 must be positive");
    const double k0 = kTwoPi / lambda0;
    const double k1 = iface.n1() * k0;
    const double ky = k1 * std::sin(theta);
    const double h = k0 * relative_step;
    auto phase = [&](double kt) { return std::arg(fresnel_reflection(iface, std::asin(kt / k1))); };
    return -(phase(ky + h) - phase(ky - h)) / (2.0 * h);
}

/// Relative dispersion mismatch |k.k - (n omega)^2| / (n omega)^2.
inline double dispersion_residual(const Mode& m, double refractive_index) {
    const double target = refractive_index * refractive_index * m.omega * m.omega;
    return std::abs(m.k_squared() - target) / target;
}

}  // namespace wolter
