#include <exception>
#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "tdscat/runner.hpp"

// Command line front end: one subcommand per run kind, a config file in, an
// output directory out. Exit codes: 0 success, 1 precondition or solver
// failure (diagnostic on stderr), 2 a threshold verdict failed.
int main(int argc, char** argv) {
    CLI::App app{"time-domain scattering by clusters of small sound-soft holes"};
    app.require_subcommand(1);

    std::string config, out;
    int threads = 1;
    bool force = false;

    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "march a hole cluster and record traces and snapshots"},
        {"oracle-validate",
         "sweep sphere radii against the point model and gate on the fitted slope"},
        {"medium", "march an effective medium volume, with an optional cluster comparison"},
        {"design", "turn a density or capacitance profile into a hole layout"},
        {"convergence", "sweep a discretization parameter and fit rates"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config, "run configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory")->required();
        sub->add_option("--threads", threads, "worker threads");
        sub->add_flag("--force", force, "march despite a failed solvability margin");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string cmd = app.get_subcommands().at(0)->get_name();
        const tdscat::RunConfig cfg = tdscat::load_run_config(config, cmd, out, threads, force);
        return tdscat::run_command(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
