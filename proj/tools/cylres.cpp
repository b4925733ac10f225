#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cylres/experiments.hpp"

namespace {

void print_list() {
    std::cout << "experiments:\n";
    for (const auto& e : cylres::experiment_names()) std::cout << "  " << e << '\n';
    std::cout << "builtin potentials:\n";
    for (const auto& p : cylres::builtin_potentials()) std::cout << "  " << p << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scattering resonances of -Laplacian + V on the cylinder"};
    app.usage("Usage: cylres <experiment> --config <path|default> [--out <dir>] [--threads N] [--list]");
    std::string experiment, config_path, out_dir;
    int threads = 0;
    bool list = false;
    app.add_option("experiment", experiment, "experiment name (see --list)");
    app.add_option("--config", config_path, "JSON config file, or 'default'");
    app.add_option("--out", out_dir, "output directory (default cylres-out/<experiment>)");
    app.add_option("--threads", threads, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
    app.add_flag("--list", list, "list experiments and builtin potentials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (list) {
        print_list();
        return 0;
    }
    if (experiment.empty() || !cylres::is_experiment(experiment) || config_path.empty()) {
        if (!experiment.empty() && !cylres::is_experiment(experiment))
            std::cerr << "cylres: unknown experiment '" << experiment << "'\n";
        else if (experiment.empty())
            std::cerr << "cylres: missing experiment name\n";
        else
            std::cerr << "cylres: missing --config\n";
        std::cerr << app.help();
        return 1;
    }

    cylres::ExperimentConfig cfg;
    try {
        cylres::Json overrides = cylres::Json::object();
        if (config_path != "default") {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open config " + config_path);
            overrides = cylres::Json::parse(in);
        }
        if (threads > 0) overrides["threads"] = threads;
        cfg = cylres::load_config(experiment, overrides);
    } catch (const std::exception& e) {
        std::cerr << "cylres: " << e.what() << '\n';
        return 1;
    }
    if (out_dir.empty()) out_dir = "cylres-out/" + experiment;

    const auto result = cylres::run_experiment(cfg);
    try {
        cylres::write_outputs(result, cfg, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "cylres: " << e.what() << '\n';
        return 1;
    }
    for (const auto& c : result.criteria)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    if (result.partial) {
        std::cerr << "cylres: " << experiment << " aborted: " << result.error << '\n';
        return 1;
    }
    std::cout << "outputs written to " << out_dir << '\n';
    return result.all_pass() ? 0 : 2;
}
