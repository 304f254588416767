// Command line front end: wolter <command> <config> [--out PREFIX]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wolter/cli.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw wolter::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// One seed per line, "y z" or "y,z"; '#' starts a comment.
std::vector<wolter::Point2> read_seeds(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<wolter::Point2> seeds;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        for (auto& c : line)
            if (c == ',') c = ' ';
        std::istringstream ls(line);
        double y = 0, z = 0;
        if (!(ls >> y)) continue;
        if (!(ls >> z)) throw wolter::ConfigError("seed file line " + std::to_string(n) + ": expected 'y z'");
        seeds.push_back({y, z});
    }
    return seeds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Total-reflection field simulator: field maps, vortices, energy streamlines, circulation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_prefix;
    std::string seed_file;
    double dispersion_error = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "Run configuration file")->required();
        cmd->add_option("--out", out_prefix, "Output path prefix (overrides 'output' in the config)");
    };

    auto* field = app.add_subcommand("field", "Write the field grid CSV");
    auto* vortices = app.add_subcommand("vortices", "Write nodes and stagnation points as JSON");
    auto* streamlines = app.add_subcommand("streamlines", "Trace energy streamlines to JSON");
    auto* circ = app.add_subcommand("circulation", "Circulation around the configured contour");
    auto* bern = app.add_subcommand("bernoulli", "Sample the Bernoulli streamline equation to CSV");
    auto* check = app.add_subcommand("check", "Run the invariant suite; exit 1 on failure");
    for (auto* c : {field, vortices, streamlines, circ, bern, check}) add_common(c);
    streamlines->add_option("--seed-file", seed_file, "Explicit seeds, one 'y z' pair per line");
    // Negative control for the check suite; not part of the public interface.
    check->add_option("--inject-dispersion-error", dispersion_error)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version exit 0; usage errors count as config errors
        return app.exit(e) == 0 ? wolter::kExitOk : wolter::kExitConfigError;
    }

    try {
        wolter::RunConfig cfg = wolter::parse_config(read_file(config_path));
        if (!out_prefix.empty()) cfg.output = out_prefix;
        if (!seed_file.empty()) cfg.streamlines.seeds = read_seeds(seed_file);

        if (field->parsed()) {
            std::cout << wolter::run_field(cfg) << '\n';
        } else if (vortices->parsed()) {
            std::cout << wolter::run_vortices(cfg) << '\n';
        } else if (streamlines->parsed()) {
            std::cout << wolter::run_streamlines(cfg) << '\n';
        } else if (circ->parsed()) {
            std::cout << wolter::run_circulation(cfg) << '\n';
        } else if (bern->parsed()) {
            std::cout << wolter::run_bernoulli(cfg) << '\n';
        } else if (check->parsed()) {
            const auto [path, ok] = wolter::run_checks(cfg, dispersion_error);
            std::cout << path << '\n';
            if (!ok) {
                std::cerr << "invariant checks failed (see " << path << ")\n";
                return wolter::kExitCheckFailed;
            }
        }
    } catch (const wolter::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return wolter::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return wolter::kExitConfigError;
    }
    return wolter::kExitOk;
}
