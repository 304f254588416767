/**
 * @file checks.hpp
 * @brief The invariant suite behind `wolter check`: continuity convergence,
 * eikonal consistency, circulation quantization and the Bernoulli
 * cross-validation. Each check reports its measured value and tolerance.
 */
#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "wolter/bernoulli.hpp"
#include "wolter/flow.hpp"
#include "wolter/gw_scalar.hpp"

namespace wolter {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    /// "<" : value must stay below tolerance; ">=" : value must reach it.
    std::string comparison = "<";
    bool passed = false;
};

inline CheckResult make_check(std::string name, double value, double tolerance, std::string comparison) {
    CheckResult r{std::move(name), value, tolerance, std::move(comparison), false};
    r.passed = std::isfinite(value) && (r.comparison == "<" ? value < tolerance : value >= tolerance);
    return r;
}

/// Uniform random points in the region, at least `interface_gap` away from
/// z = 0. Deterministic for a given seed.
inline std::vector<Point2> random_points(const Region& region, std::size_t count, std::uint64_t seed,
                                         double interface_gap = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uy(region.y_min, region.y_max);
    std::uniform_real_distribution<double> uz(region.z_min, region.z_max);
    std::vector<Point2> out;
    while (out.size() < count) {
        const Point2 p{uy(rng), uz(rng)};
        if (std::abs(p.z) < interface_gap) continue;
        out.push_back(p);
    }
    return out;
}

/// Observed convergence order of the continuity residual at one point:
/// least-squares slope of log r against log h.
template <Field F>
double continuity_order(const F& field, const Point2& p, double t, const std::vector<double>& steps) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double h : steps) {
        const double x = std::log(h);
        const double y = std::log(continuity_residual(field, in_plane(p), t, h));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(steps.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Minimum observed order over `count` random points with steps
/// {1e-2, 5e-3, 2.5e-3} lambda. Points within 0.05 lambda of the interface
/// are skipped: V is only C^1 across z = 0.
template <Field F>
CheckResult check_continuity(const F& field, const Region& region, double t, std::size_t count = 20,
                             std::uint64_t seed = 20240601) {
    const double lambda = kTwoPi / field.wavenumber();
    const std::vector<double> steps{1e-2 * lambda, 5e-3 * lambda, 2.5e-3 * lambda};
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& p : random_points(region, count, seed, 0.05 * lambda))
        worst = std::min(worst, continuity_order(field, p, t, steps));
    return make_check("continuity_order", worst, 1.8, ">=");
}

/// Largest relative gap between the flux form and the eikonal form of g at
/// random points with A > 1e-6 max A.
template <Field F>
CheckResult check_eikonal(const F& field, const Region& region, double t, std::size_t count = 100,
                          std::uint64_t seed = 20240602) {
    const double k0 = field.wavenumber();
    const auto pts = random_points(region, 4 * count, seed);
    double a_max = 0.0;
    std::vector<FieldSample> samples;
    samples.reserve(pts.size());
    for (const auto& p : pts) {
        samples.push_back(eval_field(field, in_plane(p), t));
        a_max = std::max(a_max, samples.back().A);
    }
    double worst = 0.0;
    std::size_t used = 0;
    for (const auto& s : samples) {
        if (used == count) break;
        if (!(s.A > 1e-6 * a_max) || !s.phase_defined) continue;
        const Vec3 ge = eikonal_momentum(s, k0);
        worst = std::max(worst, norm(ge - s.g) / norm(s.g));
        ++used;
    }
    return make_check("eikonal_consistency", worst, 1e-8, "<");
}

/// Largest |circulation/2pi - winding| over nodes and radii. A radius is
/// skipped for a node when another node lies within 1.5 radii.
template <Field F>
CheckResult check_circulation(const F& field, const std::vector<CriticalPoint>& nodes, double t,
                              const std::vector<double>& radii = {0.1, 0.2, 0.3}) {
    const double lambda = kTwoPi / field.wavenumber();
    double worst = 0.0;
    std::size_t measured = 0;
    for (const auto& n : nodes) {
        if (n.kind != CriticalKind::node || !n.confident) continue;
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& o : nodes)
            if (&o != &n && o.kind == CriticalKind::node) nearest = std::min(nearest, distance(o.position, n.position));
        for (double r : radii) {
            const double radius = r * lambda;
            if (nearest < 1.5 * radius) continue;
            const auto c = circulation(field, circle_contour(n.position, radius), t);
            worst = std::max(worst, std::abs(c.value / kTwoPi - n.winding));
            ++measured;
        }
    }
    auto r = make_check("circulation_quantization", worst, 1e-3, "<");
    if (measured == 0) r.passed = true;  // no nodes: nothing to quantize
    return r;
}

/// Max |closed form - RK4| over the RK4 samples on the regular branch.
inline CheckResult check_bernoulli(const BernoulliParams& params, double step) {
    const auto exact = bernoulli_closed_form(params);
    const auto num = bernoulli_rk4(params, step);
    double worst = 0.0;
    for (std::size_t i = 0; i < num.z.size(); ++i) {
        const double ref = exact(num.z[i]);
        if (std::isnan(ref)) break;
        worst = std::max(worst, std::abs(ref - num.y[i]));
    }
    return make_check("bernoulli_cross_validation", worst, 1e-6, "<");
}

}  // namespace wolter
