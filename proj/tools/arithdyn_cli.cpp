// arithdyn command line: run experiments, density and degree reports.
//
// Exit codes: 0 all checks pass, 2 a check fails, 3 resource cap hit,
// 4 invalid config or input, 1 anything else.

#include "arithdyn/arithdyn.h"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

int exit_code(ad_status s)
{
    switch (s) {
    case AD_OK:
        return 0;
    case AD_ASSERTION_FAILED:
        return 2;
    case AD_RESOURCE_EXCEEDED:
        return 3;
    case AD_CONFIG_ERROR:
    case AD_INVALID_ARGUMENT:
        return 4;
    default:
        return 1;
    }
}

// The summary goes to stdout, diagnostics to stderr.
int report(ad_status s)
{
    if (s == AD_OK || s == AD_ASSERTION_FAILED)
        std::cout << ad_last_summary() << '\n';
    if (s != AD_OK)
        std::cerr << ad_last_diagnostic() << '\n';
    return exit_code(s);
}

}  // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Dynamical and arithmetic degree experiments for triangular polynomial maps"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ad_version()));

    std::optional<std::uint64_t> seed;
    std::string out_dir;
    app.add_option("--seed", seed, "Seed for point sampling (overrides the config)");
    app.add_option("--out-dir", out_dir, "Output directory (overrides the config)");

    auto *run = app.add_subcommand("run", "Run the experiment described by a config file");
    std::string config;
    run->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);

    auto *density = app.add_subcommand("density", "Exact rank check for a common hypersurface");
    std::string points;
    unsigned degree = 2;
    density->add_option("--points", points, "Points CSV (x1,...,xN or x1_num,x1_den,...)")
        ->required()
        ->check(CLI::ExistingFile);
    density->add_option("--degree", degree, "Degree bound d")->check(CLI::PositiveNumber);

    auto *degrees = app.add_subcommand("degrees", "Degree matrix, dynamical degree and degree sequence");
    std::string map_path;
    std::size_t n_max = 6;
    degrees->add_option("--map", map_path, "Map JSON")->required()->check(CLI::ExistingFile);
    degrees->add_option("--nmax", n_max, "Last iterate")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 4;
    }

    if (run->parsed()) {
        const auto s = ad_run_experiment(config.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), seed ? 1 : 0,
                                         seed.value_or(0));
        return report(s);
    }
    const std::string dir = out_dir.empty() ? "out" : out_dir;
    if (density->parsed())
        return report(ad_density(points.c_str(), degree, dir.c_str()));
    return report(ad_degrees(map_path.c_str(), n_max, dir.c_str()));
}
