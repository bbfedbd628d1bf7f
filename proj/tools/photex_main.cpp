// photex command line: scenario runner and data emitter.
//   photex run <config>        execute every declared output
//   photex optimize <config>   execute only the optimization outputs
//   photex list-scenarios [dir]
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "photex/scenario.hpp"
#include "photex/version.hpp"

namespace {

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("PHOTEX_OUT_DIR"); env && *env) return env;
    return ".";
}

int run_command(const std::string& config_path, const std::string& out_dir,
                int threads, bool strict, bool optimization_only) {
    if (threads > 0) {
#ifdef _OPENMP
        omp_set_num_threads(threads);
#endif
    }
    photex::RunOptions options;
    options.out_dir = resolve_out_dir(out_dir);
    options.strict = strict;
    const photex::Config config = photex::load_config(config_path);
    return optimization_only ? photex::optimize_config(config, options, std::cout)
                             : photex::run_config(config, options, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"photex: single-photon / two-level-atom excitation toolkit"};
    app.set_version_flag("--version", std::string("photex ") + photex::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = 0;
    bool strict = false;
    bool seedless = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out-dir", out_dir, "output directory (default: $PHOTEX_OUT_DIR or .)");
        cmd->add_option("--threads", threads, "OpenMP thread count (0 = library default)");
        cmd->add_flag("--strict", strict, "treat warnings as errors");
        cmd->add_flag("--seedless", seedless,
                      "reserved; the toolkit is deterministic and has no randomness");
    };

    CLI::App* run = app.add_subcommand("run", "run a scenario config");
    run->add_option("config", config_path, "scenario config (TOML)")->required();
    add_common(run);

    CLI::App* optimize = app.add_subcommand("optimize", "run the optimization outputs of a config");
    optimize->add_option("config", config_path, "scenario config (TOML)")->required();
    add_common(optimize);

    std::string scenario_dir = PHOTEX_DEFAULT_SCENARIO_DIR;
    CLI::App* list = app.add_subcommand("list-scenarios", "list bundled scenario configs");
    list->add_option("dir", scenario_dir, "scenario directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (seedless) {
            std::cerr << "error: --seedless is reserved; no randomness exists to seed\n";
            return photex::kExitConfig;
        }
        if (run->parsed()) {
            return run_command(config_path, out_dir, threads, strict, false);
        }
        if (optimize->parsed()) {
            return run_command(config_path, out_dir, threads, strict, true);
        }
        if (list->parsed()) {
            return photex::list_scenarios(scenario_dir, std::cout);
        }
    } catch (const photex::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return photex::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "physics invariant violation: " << e.what() << "\n";
        return photex::kExitPhysics;
    }
    return photex::kExitOk;
}
