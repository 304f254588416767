/**
 * @file cli.hpp
 * @brief File-producing operations behind the `wolter` command line tool.
 *
 * Output files, for an output prefix P:
 *   P_field.csv         y,z,re_v,im_v,amp,phase,gy,gz,w  (z outer, y inner, both ascending)
 *   P_vortices.json     array of critical points, ordered by (z, y)
 *   P_streamlines.json  array of polylines
 *   P_circulation.json  circulation of the configured contour
 *   P_bernoulli.csv     z,y_rk4,y_closed
 *   P_checks.json       invariant suite report
 *
 * Floats are written with 17 significant digits so every double survives a
 * text round trip. Non-finite values are written as `nan` in CSV and `null`
 * in JSON.
 */
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wolter/bernoulli.hpp"
#include "wolter/checks.hpp"
#include "wolter/config.hpp"
#include "wolter/flow.hpp"
#include "wolter/gw_scalar.hpp"
#include "wolter/scenario.hpp"

namespace wolter {

/// Exit codes of the command line tool.
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfigError = 2 };

inline constexpr const char* kFieldCsvHeader = "y,z,re_v,im_v,amp,phase,gy,gz,w";

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::runtime_error("malformed number '" + s + "'");
    return v;
}

/// JSON number, or null when not finite.
inline nlohmann::json json_number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline std::ofstream open_output(const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

// Field grid ------------------------------------------------------------------

/// Phase in (-pi, pi]; NaN below the node threshold.
inline double csv_phase(const FieldSample& s) {
    if (!s.phase_defined) return std::numeric_limits<double>::quiet_NaN();
    return s.B <= -kPi ? kPi : s.B;
}

template <Field F>
void write_field_csv(std::ostream& out, const F& field, const Region& region, const GridSize& grid, double t) {
    out << kFieldCsvHeader << '\n';
    for (std::size_t iz = 0; iz < grid.nz; ++iz) {
        const double z = detail::grid_coord(region.z_min, region.z_max, iz, grid.nz);
        for (std::size_t iy = 0; iy < grid.ny; ++iy) {
            const double y = detail::grid_coord(region.y_min, region.y_max, iy, grid.ny);
            const FieldSample s = eval_field(field, in_plane({y, z}), t);
            out << format_double(y) << ',' << format_double(z) << ',' << format_double(s.V.real()) << ','
                << format_double(s.V.imag()) << ',' << format_double(s.A) << ',' << format_double(csv_phase(s)) << ','
                << format_double(s.g.y) << ',' << format_double(s.g.z) << ',' << format_double(s.w) << '\n';
        }
    }
}

struct FieldRow {
    double y, z, re_v, im_v, amp, phase, gy, gz, w;
};

/// Reads a field CSV back; throws on a header or column mismatch.
inline std::vector<FieldRow> read_field_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kFieldCsvHeader)
        throw std::runtime_error("field CSV: header must be '" + std::string(kFieldCsvHeader) + "'");
    std::vector<FieldRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 9> v{};
        std::size_t col = 0;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (col == 9) throw std::runtime_error("field CSV: too many columns");
            v[col++] = parse_double(cell);
        }
        if (col != 9) throw std::runtime_error("field CSV: expected 9 columns");
        rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]});
    }
    return rows;
}

// Reports ---------------------------------------------------------------------

inline nlohmann::json critical_point_json(const CriticalPoint& cp) {
    nlohmann::json j;
    j["kind"] = to_string(cp.kind);
    j["y"] = cp.position.y;
    j["z"] = cp.position.z;
    if (cp.kind == CriticalKind::node) {
        j["winding"] = cp.winding;
        j["circulation"] = json_number(cp.circulation);
    } else {
        j["saddle"] = cp.saddle;
    }
    j["residual"] = json_number(cp.residual);
    j["confident"] = cp.confident;
    return j;
}

/// Nodes and stagnation points merged and ordered by (z, y).
inline nlohmann::json vortex_report(std::vector<CriticalPoint> nodes, const std::vector<CriticalPoint>& stagnation) {
    nodes.insert(nodes.end(), stagnation.begin(), stagnation.end());
    detail::sort_by_z_then_y(nodes);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& cp : nodes) arr.push_back(critical_point_json(cp));
    return arr;
}

inline nlohmann::json streamline_json(const Point2& seed, const Streamline& s) {
    nlohmann::json j;
    j["seed"] = {seed.y, seed.z};
    j["closed"] = s.closed;
    j["terminated"] = to_string(s.terminated_reason);
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : s.points) pts.push_back({p.y, p.z});
    j["points"] = std::move(pts);
    return j;
}

// Runs ------------------------------------------------------------------------

inline std::string output_path(const RunConfig& cfg, const std::string& suffix) { return cfg.output + suffix; }

inline std::string run_field(const RunConfig& cfg) {
    const Scenario sc = make_scenario(cfg.scenario);
    const std::string path = output_path(cfg, "_field.csv");
    auto out = open_output(path);
    write_field_csv(out, sc, cfg.region, cfg.grid, cfg.t);
    return path;
}

struct CriticalPoints {
    std::vector<CriticalPoint> nodes;
    std::vector<CriticalPoint> stagnation;
};

template <Field F>
CriticalPoints find_critical_points(const F& field, const RunConfig& cfg) {
    return {find_nodes(field, cfg.region, cfg.t, cfg.grid), find_stagnation(field, cfg.region, cfg.t, cfg.grid)};
}

inline std::string run_vortices(const RunConfig& cfg) {
    const Scenario sc = make_scenario(cfg.scenario);
    const auto cps = find_critical_points(sc, cfg);
    const std::string path = output_path(cfg, "_vortices.json");
    auto out = open_output(path);
    out << vortex_report(cps.nodes, cps.stagnation).dump(2) << '\n';
    return path;
}

struct SeededStreamline {
    Point2 seed;
    Streamline line;
};

/// Automatic seeds: one per lambda x lambda block of the region, plus two
/// seeds inside every vortex core (between the node and its nearest
/// stagnation point, or at 0.01 / 0.03 lambda above the node when none is
/// known). Core seeds use a step of 1/20 of their distance to the node.
template <Field F>
std::vector<SeededStreamline> trace_streamlines(const F& field, const RunConfig& cfg) {
    const double lambda = kTwoPi / field.wavenumber();
    TraceOptions opts;
    opts.bounds = cfg.region;
    opts.stagnation_threshold = 1e-8 * median_momentum(field, cfg.region, cfg.grid, cfg.t);

    std::vector<SeededStreamline> out;
    if (!cfg.streamlines.seeds.empty()) {
        for (const auto& s : cfg.streamlines.seeds)
            out.push_back({s, trace_streamline(field, s, cfg.t, cfg.streamlines.step, cfg.streamlines.max_steps, opts)});
        return out;
    }

    const auto ny = static_cast<std::size_t>(std::max(1.0, std::floor(cfg.region.width() / lambda)));
    const auto nz = static_cast<std::size_t>(std::max(1.0, std::floor(cfg.region.height() / lambda)));
    for (std::size_t iz = 0; iz < nz; ++iz)
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const Point2 s{cfg.region.y_min + (static_cast<double>(iy) + 0.5) * cfg.region.width() / static_cast<double>(ny),
                           cfg.region.z_min + (static_cast<double>(iz) + 0.5) * cfg.region.height() / static_cast<double>(nz)};
            out.push_back({s, trace_streamline(field, s, cfg.t, cfg.streamlines.step, cfg.streamlines.max_steps, opts)});
        }

    const auto cps = find_critical_points(field, cfg);
    for (const auto& node : cps.nodes) {
        if (!node.confident) continue;
        Point2 dir{0.0, 1.0};
        double reach = 0.03 / 0.6 * lambda;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& st : cps.stagnation) {
            const double d = distance(st.position, node.position);
            if (d < best && d < 0.1 * lambda) {
                best = d;
                dir = (st.position - node.position) * (1.0 / d);
                reach = d;
            }
        }
        for (double frac : {0.3, 0.6}) {
            const double rho = frac * reach;
            const Point2 s = node.position + dir * rho;
            const double step = std::min(cfg.streamlines.step, rho / 20.0);
            out.push_back({s, trace_streamline(field, s, cfg.t, step, std::max<std::size_t>(cfg.streamlines.max_steps, 4000), opts)});
        }
    }
    return out;
}

inline std::string run_streamlines(const RunConfig& cfg) {
    const Scenario sc = make_scenario(cfg.scenario);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : trace_streamlines(sc, cfg)) arr.push_back(streamline_json(s.seed, s.line));
    const std::string path = output_path(cfg, "_streamlines.json");
    auto out = open_output(path);
    out << arr.dump(1) << '\n';
    return path;
}

inline std::string run_circulation(const RunConfig& cfg) {
    if (!cfg.circulation) throw ConfigError("the circulation command needs a [circulation] section");
    const Scenario sc = make_scenario(cfg.scenario);
    const auto c = circulation(sc, cfg.circulation->contour, cfg.t);
    nlohmann::json j;
    j["value"] = c.value;
    j["n"] = c.n;
    j["deviation"] = c.deviation;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : cfg.circulation->contour) pts.push_back({p.y, p.z});
    j["contour"] = std::move(pts);
    const std::string path = output_path(cfg, "_circulation.json");
    auto out = open_output(path);
    out << j.dump(2) << '\n';
    return path;
}

inline std::string run_bernoulli(const RunConfig& cfg) {
    const BernoulliConfig bc = cfg.bernoulli.value_or(BernoulliConfig{});
    const auto exact = bernoulli_closed_form(bc.params);
    const auto num = bernoulli_rk4(bc.params, bc.step);
    const std::string path = output_path(cfg, "_bernoulli.csv");
    auto out = open_output(path);
    out << "z,y_rk4,y_closed\n";
    for (std::size_t i = 0; i < num.z.size(); ++i)
        out << format_double(num.z[i]) << ',' << format_double(num.y[i]) << ',' << format_double(exact(num.z[i])) << '\n';
    return path;
}

struct CheckReport {
    std::vector<CheckResult> checks;
    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

/// Runs the invariant suite on the configured scenario. When
/// `dispersion_error` is nonzero the wavevector of the first dense-side mode
/// is scaled by (1 + dispersion_error), breaking k.k = n^2 omega^2; used as a
/// negative control.
inline CheckReport run_check_suite(const RunConfig& cfg, double dispersion_error = 0.0) {
    Scenario sc = make_scenario(cfg.scenario);
    if (dispersion_error != 0.0) sc.dense_modes.front().k = sc.dense_modes.front().k * (1.0 + dispersion_error);
    CheckReport rep;
    rep.checks.push_back(check_continuity(sc, cfg.region, cfg.t));
    rep.checks.push_back(check_eikonal(sc, cfg.region, cfg.t));
    rep.checks.push_back(check_circulation(sc, find_nodes(sc, cfg.region, cfg.t, cfg.grid), cfg.t));
    const BernoulliConfig bc = cfg.bernoulli.value_or(BernoulliConfig{});
    rep.checks.push_back(check_bernoulli(bc.params, bc.step));
    return rep;
}

inline nlohmann::json check_report_json(const CheckReport& rep) {
    nlohmann::json j;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : rep.checks)
        arr.push_back({{"name", c.name},
                       {"value", json_number(c.value)},
                       {"tolerance", c.tolerance},
                       {"comparison", c.comparison},
                       {"passed", c.passed}});
    j["checks"] = std::move(arr);
    j["passed"] = rep.passed();
    return j;
}

inline std::pair<std::string, bool> run_checks(const RunConfig& cfg, double dispersion_error = 0.0) {
    const CheckReport rep = run_check_suite(cfg, dispersion_error);
    const std::string path = output_path(cfg, "_checks.json");
    auto out = open_output(path);
    out << check_report_json(rep).dump(2) << '\n';
    return {path, rep.passed()};
}

}  // namespace wolter
