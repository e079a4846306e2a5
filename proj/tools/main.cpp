#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "sdde/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Non-negativity checks, kernels, and paths for subordinator-driven "
                 "delay equations and CARMA models"};
    app.require_subcommand(1);

    std::string spec_path;
    sdde::CliFlags flags;
    std::string out_dir;
    uint64_t seed = 0;
    double dt = 0.0, horizon = 0.0, grid_step = 0.0;
    int nmax = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("spec", spec_path, "model spec (JSON file)")->required();
        sub->add_option("--out", out_dir, "output directory (created if absent)");
        sub->add_option("--seed", seed, "RNG seed override");
        sub->add_option("--dt", dt, "time step override");
        sub->add_option("--horizon", horizon, "kernel horizon override");
        sub->add_option("--nmax", nmax, "monotonicity derivative order override");
        sub->add_option("--grid-step", grid_step, "region sweep step override");
        return sub;
    };
    add_common(app.add_subcommand("check", "decide non-negativity of the stationary solution"));
    add_common(app.add_subcommand("kernel", "tabulate the moving-average kernel"));
    add_common(app.add_subcommand("simulate", "sample a stationary path"));
    add_common(app.add_subcommand("region", "sweep a parameter region and classify each point"));
    add_common(app.add_subcommand("mcheck", "decide entrywise non-negativity (multivariate)"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--out")) flags.out = out_dir;
    if (sub->count("--seed")) flags.seed = seed;
    if (sub->count("--dt")) flags.dt = dt;
    if (sub->count("--horizon")) flags.horizon = horizon;
    if (sub->count("--nmax")) flags.nmax = nmax;
    if (sub->count("--grid-step")) flags.grid_step = grid_step;

    std::ifstream file(spec_path);
    if (!file) {
        std::cerr << "error: cannot open spec file: " << spec_path << '\n';
        return 2;
    }
    std::ostringstream text;
    text << file.rdbuf();

    return sdde::run_command(sub->get_name(), text.str(), flags, std::cout, std::cerr);
}
