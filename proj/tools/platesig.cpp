#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "platesig/platesig.hpp"

namespace {

int verbosity_from_env() {
    const char* v = std::getenv("PLATESIG_LOG");
    if (!v) return 1;
    const std::string s(v);
    if (s == "quiet") return 0;
    if (s == "debug") return 2;
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kirchhoff plate bending with Signorini boundary conditions"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    int sweep = -1;

    CLI::App* solve = app.add_subcommand("solve", "run a scenario config");
    solve->add_option("config", config_path, "scenario config file")->required();
    solve->add_option("--sweep", sweep, "run a convergence sweep with N levels");
    solve->add_option("--out", out_dir, "output directory override");
    solve->add_option("--set", overrides, "override a config key, e.g. --set domain.nx=64");

    CLI11_PARSE(app, argc, argv);

    const int verbosity = verbosity_from_env();
    try {
        platesig::Scenario sc = platesig::load_scenario(config_path);
        for (const std::string& ov : overrides) {
            const auto eq = ov.find('=');
            if (eq == std::string::npos)
                throw platesig::ConfigError(ov, "--set expects key=value");
            platesig::scenario_set(sc, ov.substr(0, eq), ov.substr(eq + 1));
        }
        if (sweep >= 0) sc.sweep_levels = sweep;
        if (!out_dir.empty()) sc.out_dir = out_dir;
        const platesig::RunResult result = platesig::run_scenario(sc, std::cout, verbosity);
        if (result.exit_code != 0 && verbosity >= 1)
            std::cerr << "solver failed, see report.json in " << sc.out_dir << '\n';
        return result.exit_code;
    } catch (const platesig::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
