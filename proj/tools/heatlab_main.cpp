#include <CLI11.hpp>
#include <iostream>

#include "heatlab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"heatlab - steady-state heat transport in a qubit-phonon hybrid system"};
    app.require_subcommand(1);

    heatlab::RunOptions options;
    CLI::App* run = app.add_subcommand("run", "solve and write CSV results");
    run->add_option("--config", options.config_path, "config file (key = value lines)");
    run->add_option("--preset", options.preset, "named preset from the presets directory");
    run->add_option("--out", options.out_dir, "output directory")->default_val(".");
    run->add_option("--jobs", options.jobs, "worker threads (HEATLAB_JOBS overrides)");

    CLI11_PARSE(app, argc, argv);
    return heatlab::run(options, std::cout, std::cerr);
}
