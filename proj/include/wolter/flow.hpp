/**
 * @file flow.hpp
 * @brief Energy-flow analysis in the plane of incidence: streamlines of the
 * momentum density, phase singularities (nodes) with their winding numbers,
 * stagnation points of g, and circulation integrals.
 *
 * Everything is evaluated on the x = 0 plane. Orientation: a contour is
 * counterclockwise in (y, z); positive winding means the phase of V grows
 * counterclockwise.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wolter/field.hpp"
#include "wolter/gw_scalar.hpp"
#include "wolter/types.hpp"

namespace wolter {

struct Region {
    double y_min = -3.0;
    double y_max = 3.0;
    double z_min = -2.0;
    double z_max = 2.0;

    bool contains(const Point2& p) const { return p.y >= y_min && p.y <= y_max && p.z >= z_min && p.z <= z_max; }
    double width() const { return y_max - y_min; }
    double height() const { return z_max - z_min; }
};

/// Number of grid points along y and z (both ends included).
struct GridSize {
    std::size_t ny = 600;
    std::size_t nz = 400;
};

enum class CriticalKind { node, stagnation };

struct CriticalPoint {
    Point2 position{};
    CriticalKind kind = CriticalKind::node;
    /// Nodes only.
    int winding = 0;
    /// Nodes only: phase circulation (radians) on a small circle around the node.
    double circulation = 0.0;
    /// |V| for nodes, |g| for stagnation points, at the refined position.
    double residual = 0.0;
    /// Determinant of the refinement Jacobian: Im(V_y* V_z) for nodes,
    /// det(dg) for stagnation points (negative means saddle).
    double jacobian_det = 0.0;
    bool saddle = false;
    /// False when Newton refinement did not converge.
    bool confident = true;
};

struct NodeSearchStats {
    std::size_t candidate_cells = 0;
    /// Zeros whose Jacobian is rank deficient: crossings of nodal lines, not
    /// isolated phase singularities.
    std::size_t nodal_line_zeros = 0;
    std::size_t unconverged = 0;
};

enum class TerminationReason { max_steps, left_domain, stagnation, closed_loop };

struct Streamline {
    std::vector<Point2> points;
    /// Arc length from the start at each point.
    std::vector<double> arc_length;
    bool closed = false;
    TerminationReason terminated_reason = TerminationReason::max_steps;
};

struct CirculationResult {
    double value = 0.0;
    int n = 0;
    /// |value / 2pi - n|
    double deviation = 0.0;
};

inline std::string to_string(CriticalKind k) { return k == CriticalKind::node ? "node" : "stagnation"; }

inline std::string to_string(TerminationReason r) {
    switch (r) {
        case TerminationReason::max_steps: return "max_steps";
        case TerminationReason::left_domain: return "left_domain";
        case TerminationReason::stagnation: return "stagnation";
        case TerminationReason::closed_loop: return "closed_loop";
    }
    return "unknown";
}

/// Closed polygon approximating a counterclockwise circle; first == last.
inline std::vector<Point2> circle_contour(const Point2& center, double radius, std::size_t vertices = 256) {
    std::vector<Point2> c;
    c.reserve(vertices + 1);
    for (std::size_t i = 0; i < vertices; ++i) {
        const double a = kTwoPi * static_cast<double>(i) / static_cast<double>(vertices);
        c.push_back({center.y + radius * std::cos(a), center.z + radius * std::sin(a)});
    }
    c.push_back(c.front());
    return c;
}

/// Even-odd point-in-polygon test.
inline bool point_in_polygon(const Point2& p, const std::vector<Point2>& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& a = poly[i];
        const Point2& b = poly[j];
        if ((a.z > p.z) != (b.z > p.z) && p.y < (b.y - a.y) * (p.z - a.z) / (b.z - a.z) + a.y) inside = !inside;
    }
    return inside;
}

namespace detail {

template <Field F>
double wavelength_of(const F& field) {
    return kTwoPi / field.wavenumber();
}

template <Field F>
void require_grid_density(const F& field, const Region& region, const GridSize& grid, const char* who) {
    if (grid.ny < 2 || grid.nz < 2) throw std::invalid_argument(std::string(who) + ": grid needs at least 2x2 points");
    if (!(region.y_min < region.y_max && region.z_min < region.z_max))
        throw std::invalid_argument(std::string(who) + ": empty region");
    const double lambda = wavelength_of(field);
    const double per_y = static_cast<double>(grid.ny - 1) / region.width() * lambda;
    const double per_z = static_cast<double>(grid.nz - 1) / region.height() * lambda;
    if (per_y < 8.0 || per_z < 8.0)
        throw std::invalid_argument(std::string(who) + ": grid must have at least 8 points per wavelength");
}

inline double grid_coord(double lo, double hi, std::size_t i, std::size_t n) {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

/// Row-major grid storage, z outer.
template <class T>
struct Grid2 {
    std::size_t ny = 0;
    std::size_t nz = 0;
    std::vector<T> data;
    T& at(std::size_t iy, std::size_t iz) { return data[iz * ny + iy]; }
    const T& at(std::size_t iy, std::size_t iz) const { return data[iz * ny + iy]; }
};

template <Field F, class Fn>
auto sample_grid(const F& field, const Region& region, const GridSize& grid, double t, Fn&& fn) {
    using T = decltype(fn(field.jet(Vec3{}, t)));
    Grid2<T> out{grid.ny, grid.nz, std::vector<T>(grid.ny * grid.nz)};
    for (std::size_t iz = 0; iz < grid.nz; ++iz) {
        const double z = grid_coord(region.z_min, region.z_max, iz, grid.nz);
        for (std::size_t iy = 0; iy < grid.ny; ++iy) {
            const double y = grid_coord(region.y_min, region.y_max, iy, grid.ny);
            out.at(iy, iz) = fn(field.jet(in_plane({y, z}), t));
        }
    }
    return out;
}

struct Newton2Result {
    Point2 position{};
    bool converged = false;
};

/// Damped Newton on a 2-vector residual. `eval(p)` returns {F, J} with
/// J[i][j] = dF_i/dp_j (p = (y, z)). A tiny Levenberg term keeps the step
/// finite when J is rank deficient.
template <class Eval>
Newton2Result newton2(Point2 p, double tol, double max_step, Eval&& eval, int max_iter = 50) {
    for (int it = 0; it <= max_iter; ++it) {
        const auto [f, J] = eval(p);
        if (std::hypot(f[0], f[1]) < tol) return {p, true};
        if (it == max_iter) break;
        // (J^T J + mu I) s = J^T f
        const double a = J[0][0] * J[0][0] + J[1][0] * J[1][0];
        const double b = J[0][0] * J[0][1] + J[1][0] * J[1][1];
        const double d = J[0][1] * J[0][1] + J[1][1] * J[1][1];
        const double mu = 1e-14 * (a + d);
        const double r0 = J[0][0] * f[0] + J[1][0] * f[1];
        const double r1 = J[0][1] * f[0] + J[1][1] * f[1];
        const double det = (a + mu) * (d + mu) - b * b;
        if (!(std::abs(det) > 0.0) || !std::isfinite(det)) break;
        Point2 step{((d + mu) * r0 - b * r1) / det, ((a + mu) * r1 - b * r0) / det};
        const double len = std::hypot(step.y, step.z);
        if (!std::isfinite(len)) break;
        if (len > max_step) step = step * (max_step / len);
        p = p - step;
    }
    return {p, false};
}

template <Field F>
auto node_residual(const F& field, double t) {
    return [&field, t](const Point2& p) {
        const FieldJet j = field.jet(in_plane(p), t);
        std::array<double, 2> f{j.value.real(), j.value.imag()};
        std::array<std::array<double, 2>, 2> J{{{j.grad.y.real(), j.grad.z.real()}, {j.grad.y.imag(), j.grad.z.imag()}}};
        return std::pair{f, J};
    };
}

/// g restricted to (y, z) and its analytic Jacobian.
inline std::pair<std::array<double, 2>, std::array<std::array<double, 2>, 2>> momentum_jet(const FieldJet& j) {
    const Vec3 g = momentum_density(j);
    const std::array<cplx, 3> gv{j.grad.x, j.grad.y, j.grad.z};
    const std::array<cplx, 3> gdt{j.grad_dt.x, j.grad_dt.y, j.grad_dt.z};
    std::array<std::array<double, 2>, 2> J{};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t c = 0; c < 2; ++c) {
            const std::size_t a = i + 1;
            const std::size_t b = c + 1;
            J[i][c] = -kInv4Pi * (std::conj(gdt[b]) * gv[a] + std::conj(j.dt) * j.hessian[a][b]).real();
        }
    return {{g.y, g.z}, J};
}

inline void merge_into(std::vector<CriticalPoint>& list, const CriticalPoint& cp, double tol) {
    for (const auto& e : list)
        if (distance(e.position, cp.position) < tol) return;
    list.push_back(cp);
}

inline void sort_by_z_then_y(std::vector<CriticalPoint>& list) {
    std::sort(list.begin(), list.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.position.z != b.position.z) return a.position.z < b.position.z;
        return a.position.y < b.position.y;
    });
}

inline std::size_t samples_for(double length, double spacing) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / spacing)));
}

}  // namespace detail

// Circulation ------------------------------------------------------------------

/// Circulation of grad B around a closed polygon, from wrapped phase
/// increments. Sampling starts at 64 points per wavelength of arc and doubles
/// until the sum changes by less than 1e-4 rad.
template <Field F>
CirculationResult circulation(const F& field, const std::vector<Point2>& contour, double t) {
    if (contour.size() < 4) throw InvalidContourError("circulation: contour needs at least 3 distinct vertices");
    const double lambda = detail::wavelength_of(field);
    if (distance(contour.front(), contour.back()) > 1e-12 * lambda)
        throw InvalidContourError("circulation: contour is not closed (first vertex must equal last)");
    const double threshold = kNodeThreshold * field.amplitude_scale();

    auto sum_at = [&](double spacing) {
        double total = 0.0;
        cplx prev = field.jet(in_plane(contour.front()), t).value;
        if (std::abs(prev) <= threshold) throw InvalidContourError("circulation: contour passes through a node");
        for (std::size_t e = 0; e + 1 < contour.size(); ++e) {
            const Point2 a = contour[e];
            const Point2 b = contour[e + 1];
            const std::size_t m = detail::samples_for(distance(a, b), spacing);
            for (std::size_t s = 1; s <= m; ++s) {
                const double f = static_cast<double>(s) / static_cast<double>(m);
                const cplx v = field.jet(in_plane(a + (b - a) * f), t).value;
                if (std::abs(v) <= threshold) throw InvalidContourError("circulation: contour passes through a node");
                total += std::arg(v * std::conj(prev));
                prev = v;
            }
        }
        return total;
    };

    double spacing = lambda / 64.0;
    double value = sum_at(spacing);
    for (int refine = 0; refine < 16; ++refine) {
        spacing *= 0.5;
        const double next = sum_at(spacing);
        const bool done = std::abs(next - value) < 1e-4;
        value = next;
        if (done) break;
    }
    CirculationResult r;
    r.value = value;
    r.n = static_cast<int>(std::lround(value / kTwoPi));
    r.deviation = std::abs(value / kTwoPi - r.n);
    return r;
}

// Nodes --------------------------------------------------------------------------

/// Phase singularities of V in the region at time t.
///
/// Cells whose wrapped plaquette phase sum is +-2pi are refined by Newton on
/// (Re V, Im V) to |V| < 1e-10 * scale. A converged zero counts as a node
/// only if its Jacobian Im(V_y* V_z) is nondegenerate; its sign is the
/// winding. Each node's circulation is measured on a circle of radius
/// min(0.1 lambda, 0.45 * distance to the nearest other node).
template <Field F>
std::vector<CriticalPoint> find_nodes(const F& field, const Region& region, double t, const GridSize& grid,
                                      NodeSearchStats* stats = nullptr) {
    detail::require_grid_density(field, region, grid, "find_nodes");
    const double lambda = detail::wavelength_of(field);
    const double scale = field.amplitude_scale();
    const double dy = region.width() / static_cast<double>(grid.ny - 1);
    const double dz = region.height() / static_cast<double>(grid.nz - 1);
    const double cell = std::hypot(dy, dz);

    const auto phase = detail::sample_grid(field, region, grid, t, [](const FieldJet& j) { return std::arg(j.value); });

    NodeSearchStats local;
    std::vector<CriticalPoint> nodes;
    const auto residual = detail::node_residual(field, t);
    for (std::size_t iz = 0; iz + 1 < grid.nz; ++iz) {
        for (std::size_t iy = 0; iy + 1 < grid.ny; ++iy) {
            const double p00 = phase.at(iy, iz);
            const double p10 = phase.at(iy + 1, iz);
            const double p11 = phase.at(iy + 1, iz + 1);
            const double p01 = phase.at(iy, iz + 1);
            const double sum = wrap_phase(p10 - p00) + wrap_phase(p11 - p10) + wrap_phase(p01 - p11) + wrap_phase(p00 - p01);
            if (std::abs(sum) < kPi) continue;
            ++local.candidate_cells;
            const int plaquette_winding = sum > 0 ? 1 : -1;

            const Point2 center{detail::grid_coord(region.y_min, region.y_max, iy, grid.ny) + 0.5 * dy,
                                detail::grid_coord(region.z_min, region.z_max, iz, grid.nz) + 0.5 * dz};
            const auto refined = detail::newton2(center, 1e-10 * scale, cell, residual);
            const FieldJet j = field.jet(in_plane(refined.position), t);
            const double det = (std::conj(j.grad.y) * j.grad.z).imag();
            const double grad2 = std::norm(j.grad.y) + std::norm(j.grad.z);

            CriticalPoint cp;
            cp.kind = CriticalKind::node;
            cp.position = refined.position;
            cp.residual = std::abs(j.value);
            cp.jacobian_det = det;
            if (refined.converged) {
                if (!(std::abs(det) > 1e-8 * grad2)) {
                    ++local.nodal_line_zeros;
                    continue;
                }
                cp.winding = det > 0 ? 1 : -1;
            } else {
                ++local.unconverged;
                cp.confident = false;
                cp.position = center;
                cp.residual = std::abs(field.jet(in_plane(center), t).value);
                cp.winding = plaquette_winding;
            }
            if (!region.contains(cp.position)) continue;
            detail::merge_into(nodes, cp, 1e-6 * lambda);
        }
    }

    for (auto& n : nodes) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& o : nodes)
            if (&o != &n) nearest = std::min(nearest, distance(n.position, o.position));
        const double radius = std::min(0.1 * lambda, 0.45 * nearest);
        try {
            n.circulation = circulation(field, circle_contour(n.position, radius), t).value;
        } catch (const InvalidContourError&) {
            n.circulation = std::numeric_limits<double>::quiet_NaN();
        }
    }
    detail::sort_by_z_then_y(nodes);
    if (stats) *stats = local;
    return nodes;
}

// Stagnation points ----------------------------------------------------------------

/// Zeros of g away from nodes.
///
/// Newton seeds: centers of cells where both g components change sign, plus
/// points around every node (saddles of g commonly sit next to a node, well
/// inside one grid cell). Converged points with |V| < 1e-6 * scale are the
/// nodes themselves and are discarded.
template <Field F>
std::vector<CriticalPoint> find_stagnation(const F& field, const Region& region, double t, const GridSize& grid) {
    detail::require_grid_density(field, region, grid, "find_stagnation");
    const double lambda = detail::wavelength_of(field);
    const double scale = field.amplitude_scale();
    const double dy = region.width() / static_cast<double>(grid.ny - 1);
    const double dz = region.height() / static_cast<double>(grid.nz - 1);
    const double cell = std::hypot(dy, dz);

    const auto g = detail::sample_grid(field, region, grid, t, [](const FieldJet& j) {
        const Vec3 m = momentum_density(j);
        return std::array<double, 2>{m.y, m.z};
    });
    double g_scale = 0.0;
    for (const auto& v : g.data) g_scale = std::max(g_scale, std::hypot(v[0], v[1]));
    if (g_scale == 0.0) return {};

    auto eval = [&field, t](const Point2& p) { return detail::momentum_jet(field.jet(in_plane(p), t)); };

    std::vector<CriticalPoint> out;
    auto accept = [&](const Point2& seed, double max_step, bool report_failure) {
        const auto refined = detail::newton2(seed, 1e-10 * g_scale, max_step, eval);
        const FieldJet j = field.jet(in_plane(refined.position), t);
        const auto [gv, J] = detail::momentum_jet(j);
        if (!refined.converged) {
            if (!report_failure) return;
            CriticalPoint cp;
            cp.kind = CriticalKind::stagnation;
            cp.position = seed;
            const auto [g0, J0] = eval(seed);
            cp.residual = std::hypot(g0[0], g0[1]);
            cp.jacobian_det = J0[0][0] * J0[1][1] - J0[0][1] * J0[1][0];
            cp.saddle = cp.jacobian_det < 0.0;
            cp.confident = false;
            detail::merge_into(out, cp, 1e-6 * lambda);
            return;
        }
        if (std::abs(j.value) < 1e-6 * scale) return;
        if (!region.contains(refined.position)) return;
        CriticalPoint cp;
        cp.kind = CriticalKind::stagnation;
        cp.position = refined.position;
        cp.residual = std::hypot(gv[0], gv[1]);
        cp.jacobian_det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        cp.saddle = cp.jacobian_det < 0.0;
        detail::merge_into(out, cp, 1e-6 * lambda);
    };

    for (std::size_t iz = 0; iz + 1 < grid.nz; ++iz) {
        for (std::size_t iy = 0; iy + 1 < grid.ny; ++iy) {
            const std::array corners{g.at(iy, iz), g.at(iy + 1, iz), g.at(iy + 1, iz + 1), g.at(iy, iz + 1)};
            bool ok = true;
            for (std::size_t c = 0; c < 2 && ok; ++c) {
                double lo = corners[0][c];
                double hi = corners[0][c];
                for (const auto& v : corners) {
                    lo = std::min(lo, v[c]);
                    hi = std::max(hi, v[c]);
                }
                ok = lo < 0.0 && hi > 0.0;
            }
            if (!ok) continue;
            const Point2 center{detail::grid_coord(region.y_min, region.y_max, iy, grid.ny) + 0.5 * dy,
                                detail::grid_coord(region.z_min, region.z_max, iz, grid.nz) + 0.5 * dz};
            accept(center, cell, true);
        }
    }

    for (const auto& node : find_nodes(field, region, t, grid)) {
        if (!node.confident) continue;
        for (double r : {1e-5, 1e-4, 1e-3, 1e-2}) {
            const double d = r * lambda;
            for (const Point2 off : {Point2{0.0, d}, Point2{0.0, -d}, Point2{d, 0.0}, Point2{-d, 0.0}})
                accept(node.position + off, d, false);
        }
    }
    detail::sort_by_z_then_y(out);
    return out;
}

// Streamlines -------------------------------------------------------------------------

struct TraceOptions {
    /// Tracing stops when the path leaves this box.
    Region bounds{};
    /// Absolute |g| below which the flow counts as stagnant.
    double stagnation_threshold = 0.0;
    /// Closure tolerance in units of lambda.
    double closure_tolerance = 1e-4;
    /// Local error target per step, relative to the maximum step.
    double relative_tolerance = 1e-7;
};

/// Median |g| over a grid; the reference for the stagnation threshold
/// (threshold = 1e-8 * median).
template <Field F>
double median_momentum(const F& field, const Region& region, const GridSize& grid, double t) {
    auto mags = detail::sample_grid(field, region, grid, t, [](const FieldJet& j) {
                    const Vec3 m = momentum_density(j);
                    return std::hypot(m.y, m.z);
                }).data;
    auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
    std::nth_element(mags.begin(), mid, mags.end());
    return *mid;
}

/// Energy streamline through `start`: dx/ds = g/|g| in arc length s,
/// integrated with classical RK4 under step-doubling error control. `step`
/// is the maximum step; `max_steps` bounds the number of accepted steps.
template <Field F>
Streamline trace_streamline(const F& field, const Point2& start, double t, double step, std::size_t max_steps,
                            const TraceOptions& opts = {}) {
    const double lambda = detail::wavelength_of(field);
    if (!(step > 0.0 && step <= 0.1 * lambda))
        throw std::invalid_argument("trace_streamline: step must lie in (0, 0.1 lambda]");

    Streamline line;
    line.points.push_back(start);
    line.arc_length.push_back(0.0);

    auto direction = [&](const Point2& p) -> std::optional<Point2> {
        const Vec3 g = momentum_density(field.jet(in_plane(p), t));
        const double m = std::hypot(g.y, g.z);
        if (!(m > opts.stagnation_threshold) || m == 0.0) return std::nullopt;
        return Point2{g.y / m, g.z / m};
    };
    auto rk4 = [&](const Point2& p, double h) -> std::optional<Point2> {
        const auto k1 = direction(p);
        if (!k1) return std::nullopt;
        const auto k2 = direction(p + *k1 * (0.5 * h));
        if (!k2) return std::nullopt;
        const auto k3 = direction(p + *k2 * (0.5 * h));
        if (!k3) return std::nullopt;
        const auto k4 = direction(p + *k3 * h);
        if (!k4) return std::nullopt;
        return p + (*k1 + *k2 * 2.0 + *k3 * 2.0 + *k4) * (h / 6.0);
    };

    if (!direction(start)) {
        line.terminated_reason = TerminationReason::stagnation;
        return line;
    }

    const double tol = opts.relative_tolerance * step;
    const double closure = opts.closure_tolerance * lambda;
    double h = step;
    double s = 0.0;
    double farthest = 0.0;
    Point2 p = start;
    std::size_t accepted = 0;
    while (accepted < max_steps) {
        const auto full = rk4(p, h);
        const auto half = rk4(p, 0.5 * h);
        const auto two_half = half ? rk4(*half, 0.5 * h) : std::nullopt;
        if (!full || !two_half) {
            if (h > 1e-12 * lambda) {
                h *= 0.25;
                continue;
            }
            line.terminated_reason = TerminationReason::stagnation;
            return line;
        }
        const double err = distance(*full, *two_half);
        if (err > tol && h > 1e-12 * lambda) {
            h *= std::max(0.1, 0.9 * std::pow(tol / err, 0.2));
            continue;
        }
        const Point2 prev = p;
        p = *two_half;
        s += h;
        ++accepted;
        if (!opts.bounds.contains(p)) {
            line.terminated_reason = TerminationReason::left_domain;
            return line;
        }
        farthest = std::max(farthest, distance(p, start));
        const double eff = std::min(closure, 0.05 * farthest);
        if (accepted >= 10 && farthest > 4.0 * eff) {
            // distance from start to the segment prev -> p
            const Point2 d = p - prev;
            const double len2 = d.y * d.y + d.z * d.z;
            double u = len2 > 0.0 ? ((start.y - prev.y) * d.y + (start.z - prev.z) * d.z) / len2 : 0.0;
            u = std::clamp(u, 0.0, 1.0);
            const Point2 nearest = prev + d * u;
            if (distance(nearest, start) < eff) {
                line.points.push_back(nearest);
                line.arc_length.push_back(s - h * (1.0 - u));
                line.closed = true;
                line.terminated_reason = TerminationReason::closed_loop;
                return line;
            }
        }
        line.points.push_back(p);
        line.arc_length.push_back(s);
        const double grow = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 2.0;
        h = std::min(step, h * std::clamp(grow, 0.1, 2.0));
    }
    line.terminated_reason = TerminationReason::max_steps;
    return line;
}

}  // namespace wolter
