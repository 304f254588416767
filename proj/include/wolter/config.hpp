/**
 * @file config.hpp
 * @brief Run configuration: a flat TOML subset (`key = value`, `[section]`
 * headers, `#` comments) parsed into a validated RunConfig.
 *
 * Values: numbers, double-quoted strings, true/false, and (nested) arrays of
 * numbers. Unknown sections and keys are rejected.
 *
 *     t = 0.0
 *     output = "out/wolter"
 *
 *     [scenario]
 *     kind = "wolter"            # single | wolter | braunbek
 *     n_dense = 1.5
 *     n_rare = 1.0
 *     theta_mean_deg = 45.0
 *     delta_theta_deg = 1.0      # required for wolter / braunbek
 *     lambda0 = 1.0
 *     amplitude_2 = 1.0          # optional, second incident wave
 *     phase_2_deg = 0.0          # optional
 *
 *     [region]                   # default [-3,3] x [-2,2]
 *     [grid]                     # default ny = 600, nz = 400
 *     [streamlines]              # step, max_steps, seeds = [[y, z], ...]
 *     [circulation]              # center = [y, z], radius  or  contour = [[y, z], ...]
 *     [bernoulli]                # f, F, y0, z_min, z_max, step
 */
#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wolter/bernoulli.hpp"
#include "wolter/flow.hpp"
#include "wolter/scenario.hpp"

namespace wolter {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ScenarioKind { single, wolter, braunbek };

inline std::string to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::single: return "single";
        case ScenarioKind::wolter: return "wolter";
        case ScenarioKind::braunbek: return "braunbek";
    }
    return "unknown";
}

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::wolter;
    double n_dense = 1.5;
    double n_rare = 1.0;
    double theta_mean_deg = 45.0;
    double delta_theta_deg = 0.0;
    double lambda0 = 1.0;
    double amplitude_2 = 1.0;
    double phase_2_deg = 0.0;
};

struct StreamlineConfig {
    double step = 0.01;
    std::size_t max_steps = 2000;
    /// Explicit seeds; empty means automatic seeding.
    std::vector<Point2> seeds;
};

struct CirculationConfig {
    std::vector<Point2> contour;
};

struct BernoulliConfig {
    BernoulliParams params = BernoulliParams::wolter_preset(1.0, 1.0, 0.0, 1.0, 1.0);
    double step = 1e-3;
    double f = 1.0;
};

struct RunConfig {
    ScenarioConfig scenario;
    Region region{};
    GridSize grid{};
    double t = 0.0;
    std::string output = "wolter";
    StreamlineConfig streamlines;
    std::optional<CirculationConfig> circulation;
    std::optional<BernoulliConfig> bernoulli;
};

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

inline Scenario make_scenario(const ScenarioConfig& c) {
    const Interface iface(c.n_dense, c.n_rare);
    const double theta = deg_to_rad(c.theta_mean_deg);
    const double delta = deg_to_rad(c.delta_theta_deg);
    const std::array<cplx, 2> amps{cplx{1.0}, std::polar(c.amplitude_2, deg_to_rad(c.phase_2_deg))};
    switch (c.kind) {
        case ScenarioKind::single: return build_single_wave(iface, theta, c.lambda0);
        case ScenarioKind::wolter: return build_wolter_scenario(iface, theta, delta, c.lambda0, amps);
        case ScenarioKind::braunbek: return build_braunbek_scenario(iface, theta, delta, c.lambda0, amps);
    }
    throw ConfigError("unknown scenario kind");
}

namespace detail::cfg {

struct Value;
using Array = std::vector<Value>;
struct Value {
    std::variant<double, std::string, bool, Array> v;
};

struct Entry {
    Value value;
    int line = 0;
};

class Parser {
public:
    Parser(std::string_view text, int line) : s_(text), line_(line) {}

    Value value() {
        skip_ws();
        if (pos_ >= s_.size()) fail("missing value");
        const char c = s_[pos_];
        if (c == '"') return {string()};
        if (c == '[') return {array()};
        if (s_.substr(pos_, 4) == "true") {
            pos_ += 4;
            return {true};
        }
        if (s_.substr(pos_, 5) == "false") {
            pos_ += 5;
            return {false};
        }
        return {number()};
    }

    void finish() {
        skip_ws();
        if (pos_ < s_.size()) fail("unexpected trailing text '" + std::string(s_.substr(pos_)) + "'");
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("line " + std::to_string(line_) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    std::string string() {
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
            out += s_[pos_++];
        }
        if (pos_ >= s_.size()) fail("unterminated string");
        ++pos_;
        return out;
    }

    double number() {
        const char* begin = s_.data() + pos_;
        const char* end = s_.data() + s_.size();
        if (*begin == '+') ++begin;
        double d = 0.0;
        const auto [ptr, ec] = std::from_chars(begin, end, d);
        if (ec != std::errc{} || ptr == begin) fail("expected a number, string, boolean or array");
        pos_ = static_cast<std::size_t>(ptr - s_.data());
        return d;
    }

    Array array() {
        ++pos_;
        Array out;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {
            ++pos_;
            return out;
        }
        while (true) {
            out.push_back(value());
            skip_ws();
            if (pos_ >= s_.size()) fail("unterminated array");
            if (s_[pos_] == ',') {
                ++pos_;
                continue;
            }
            if (s_[pos_] == ']') {
                ++pos_;
                return out;
            }
            fail("expected ',' or ']' in array");
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
};

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
        if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

/// Key table with consumption tracking so leftovers can be reported.
class Table {
public:
    explicit Table(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    double number(const std::string& key) {
        const Entry& e = take(key);
        if (const auto* d = std::get_if<double>(&e.value.v)) return *d;
        throw ConfigError(where(key, e) + " must be a number");
    }
    double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::size_t count(const std::string& key) {
        const Entry& e = take(key);
        const auto* d = std::get_if<double>(&e.value.v);
        if (!d || *d < 0.0 || std::floor(*d) != *d) throw ConfigError(where(key, e) + " must be a non-negative integer");
        return static_cast<std::size_t>(*d);
    }
    std::size_t count_or(const std::string& key, std::size_t fallback) { return has(key) ? count(key) : fallback; }

    std::string string(const std::string& key) {
        const Entry& e = take(key);
        if (const auto* s = std::get_if<std::string>(&e.value.v)) return *s;
        throw ConfigError(where(key, e) + " must be a quoted string");
    }
    std::string string_or(const std::string& key, const std::string& fallback) {
        return has(key) ? string(key) : fallback;
    }

    Point2 point(const std::string& key) {
        const Entry& e = take(key);
        return to_point(key, e, e.value);
    }

    std::vector<Point2> points(const std::string& key) {
        const Entry& e = take(key);
        const auto* arr = std::get_if<Array>(&e.value.v);
        if (!arr) throw ConfigError(where(key, e) + " must be an array of [y, z] pairs");
        std::vector<Point2> out;
        for (const auto& v : *arr) out.push_back(to_point(key, e, v));
        return out;
    }

    void require(const std::string& key) const {
        if (!has(key)) throw ConfigError("missing key '" + key + "'");
    }

    void reject_unused() const {
        for (const auto& [k, e] : entries_)
            if (!used_.count(k)) throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + k + "'");
    }

private:
    static std::string where(const std::string& key, const Entry& e) {
        return "line " + std::to_string(e.line) + ": '" + key + "'";
    }

    Point2 to_point(const std::string& key, const Entry& e, const Value& v) const {
        const auto* arr = std::get_if<Array>(&v.v);
        if (arr && arr->size() == 2) {
            const auto* y = std::get_if<double>(&(*arr)[0].v);
            const auto* z = std::get_if<double>(&(*arr)[1].v);
            if (y && z) return {*y, *z};
        }
        throw ConfigError(where(key, e) + " expects [y, z] number pairs");
    }

    const Entry& take(const std::string& key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError("missing key '" + key + "'");
        used_.insert(key);
        return it->second;
    }

    std::map<std::string, Entry> entries_;
    std::set<std::string> used_;
};

inline Table tokenize(std::string_view text) {
    static const std::set<std::string> kSections{"scenario", "region", "grid", "streamlines", "circulation", "bernoulli"};
    std::map<std::string, Entry> entries;
    std::string section;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        const std::string_view line = trim(strip_comment(text.substr(start, end - start)));
        start = end + 1;
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!kSections.count(section))
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = std::string(trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        Parser p(line.substr(eq + 1), line_no);
        Value v = p.value();
        p.finish();
        const std::string full = section.empty() ? key : section + "." + key;
        if (entries.count(full)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + full + "'");
        entries.emplace(full, Entry{std::move(v), line_no});
        if (end == text.size()) break;
    }
    return Table(std::move(entries));
}

}  // namespace detail::cfg

/// Parses and validates a run configuration. Throws ConfigError naming the
/// offending key on any problem.
inline RunConfig parse_config(std::string_view text) {
    auto table = detail::cfg::tokenize(text);
    RunConfig cfg;

    cfg.t = table.number_or("t", 0.0);
    cfg.output = table.string_or("output", cfg.output);

    auto& sc = cfg.scenario;
    const std::string kind = table.string("scenario.kind");
    if (kind == "single")
        sc.kind = ScenarioKind::single;
    else if (kind == "wolter")
        sc.kind = ScenarioKind::wolter;
    else if (kind == "braunbek")
        sc.kind = ScenarioKind::braunbek;
    else
        throw ConfigError("'scenario.kind' must be one of \"single\", \"wolter\", \"braunbek\" (got \"" + kind + "\")");
    sc.n_dense = table.number("scenario.n_dense");
    sc.n_rare = table.number("scenario.n_rare");
    sc.theta_mean_deg = table.number("scenario.theta_mean_deg");
    sc.lambda0 = table.number("scenario.lambda0");
    if (sc.kind == ScenarioKind::single)
        sc.delta_theta_deg = table.number_or("scenario.delta_theta_deg", 0.0);
    else
        sc.delta_theta_deg = table.number("scenario.delta_theta_deg");
    sc.amplitude_2 = table.number_or("scenario.amplitude_2", 1.0);
    sc.phase_2_deg = table.number_or("scenario.phase_2_deg", 0.0);

    cfg.region.y_min = table.number_or("region.y_min", cfg.region.y_min);
    cfg.region.y_max = table.number_or("region.y_max", cfg.region.y_max);
    cfg.region.z_min = table.number_or("region.z_min", cfg.region.z_min);
    cfg.region.z_max = table.number_or("region.z_max", cfg.region.z_max);
    cfg.grid.ny = table.count_or("grid.ny", cfg.grid.ny);
    cfg.grid.nz = table.count_or("grid.nz", cfg.grid.nz);

    cfg.streamlines.step = table.number_or("streamlines.step", cfg.streamlines.step);
    cfg.streamlines.max_steps = table.count_or("streamlines.max_steps", cfg.streamlines.max_steps);
    if (table.has("streamlines.seeds")) cfg.streamlines.seeds = table.points("streamlines.seeds");

    if (table.has("circulation.contour") || table.has("circulation.center") || table.has("circulation.radius")) {
        CirculationConfig cc;
        if (table.has("circulation.contour")) {
            cc.contour = table.points("circulation.contour");
            if (cc.contour.size() < 3) throw ConfigError("'circulation.contour' needs at least 3 vertices");
            if (!(cc.contour.front() == cc.contour.back())) cc.contour.push_back(cc.contour.front());
        } else {
            table.require("circulation.center");
            table.require("circulation.radius");
            const Point2 c = table.point("circulation.center");
            const double r = table.number("circulation.radius");
            if (!(r > 0.0)) throw ConfigError("'circulation.radius' must be positive");
            cc.contour = circle_contour(c, r);
        }
        cfg.circulation = cc;
    }

    if (table.has("bernoulli.F") || table.has("bernoulli.f")) {
        BernoulliConfig bc;
        bc.f = table.number_or("bernoulli.f", 1.0);
        const double F = table.number("bernoulli.F");
        if (F == 0.0) throw ConfigError("'bernoulli.F' must be nonzero");
        const double y0 = table.number_or("bernoulli.y0", 1.0);
        const double z_min = table.number_or("bernoulli.z_min", 0.0);
        const double z_max = table.number_or("bernoulli.z_max", 1.0);
        if (!(z_min < z_max)) throw ConfigError("'bernoulli.z_min' must be below 'bernoulli.z_max'");
        bc.params = BernoulliParams::wolter_preset(bc.f, F, z_min, z_max, y0);
        bc.step = table.number_or("bernoulli.step", bc.step);
        if (!(bc.step > 0.0)) throw ConfigError("'bernoulli.step' must be positive");
        cfg.bernoulli = bc;
    }

    table.reject_unused();

    // Physics and geometry validation.
    if (!(sc.n_dense > 0.0 && sc.n_rare > 0.0))
        throw ConfigError("'scenario.n_dense' and 'scenario.n_rare' must be positive");
    if (!(sc.n_dense > sc.n_rare))
        throw ConfigError("'scenario.n_dense' must exceed 'scenario.n_rare' for total reflection");
    if (!(sc.lambda0 > 0.0)) throw ConfigError("'scenario.lambda0' must be positive");
    if (sc.delta_theta_deg < 0.0) throw ConfigError("'scenario.delta_theta_deg' must be non-negative");
    const double crit_deg = rad_to_deg(std::asin(sc.n_rare / sc.n_dense));
    const double lo = sc.theta_mean_deg - 0.5 * sc.delta_theta_deg;
    const double hi = sc.theta_mean_deg + 0.5 * sc.delta_theta_deg;
    if (!(lo > crit_deg)) {
        std::ostringstream msg;
        msg << "'scenario.theta_mean_deg' = " << sc.theta_mean_deg << " (lowest wave at " << lo
            << " deg) is not above the critical angle " << crit_deg << " deg for n_dense = " << sc.n_dense
            << ", n_rare = " << sc.n_rare;
        throw ConfigError(msg.str());
    }
    if (!(hi < 90.0)) throw ConfigError("'scenario.theta_mean_deg' + delta/2 must stay below 90 deg");
    if (!(sc.amplitude_2 >= 0.0)) throw ConfigError("'scenario.amplitude_2' must be non-negative");

    if (!(cfg.region.y_min < cfg.region.y_max)) throw ConfigError("'region.y_min' must be below 'region.y_max'");
    if (!(cfg.region.z_min < cfg.region.z_max)) throw ConfigError("'region.z_min' must be below 'region.z_max'");
    if (cfg.grid.ny < 2 || cfg.grid.nz < 2) throw ConfigError("'grid.ny' and 'grid.nz' must be at least 2");
    if (!(cfg.streamlines.step > 0.0 && cfg.streamlines.step <= 0.1 * sc.lambda0))
        throw ConfigError("'streamlines.step' must lie in (0, 0.1 * lambda0]");
    if (cfg.output.empty()) throw ConfigError("'output' must not be empty");
    return cfg;
}

}  // namespace wolter
