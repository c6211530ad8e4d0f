#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "rydsense/errors.hpp"
#include "rydsense/scenario.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_solver = 3;

unsigned resolve_threads(int flag) {
    if (flag > 0) return static_cast<unsigned>(flag);
    if (const char* env = std::getenv("RYDSENSE_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
        throw rydsense::ConfigError(std::string("RYDSENSE_THREADS must be a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rydberg EIT electrometry simulator"};
    app.set_version_flag("--version", RYDSENSE_VERSION);
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a scenario from a JSON config");
    std::string config_path;
    std::string out_dir = "rydsense_out";
    int threads = 0;
    bool doppler_free = false;
    run->add_option("--config", config_path, "scenario config (JSON)")->required();
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    run->add_option("--threads", threads, "worker threads (default: RYDSENSE_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    run->add_flag("--doppler-free", doppler_free, "evaluate only the v = 0 velocity class");

    auto* list = app.add_subcommand("list-scenarios", "list the named scenarios");

    auto* show = app.add_subcommand("show-config", "print the resolved defaults of a scenario");
    std::string show_name;
    show->add_option("--scenario", show_name, "scenario name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    try {
        if (*list) {
            for (auto k : rydsense::all_scenarios()) std::cout << rydsense::to_string(k) << '\n';
            return 0;
        }
        if (*show) {
            const auto cfg = rydsense::preset(rydsense::parse_scenario_kind(show_name));
            std::cout << rydsense::to_json(cfg).dump(2) << '\n';
            return 0;
        }
        auto cfg = rydsense::load_config(config_path);
        if (doppler_free) cfg.doppler_free = true;
        const unsigned n = resolve_threads(threads);
        const auto result = rydsense::run_scenario(cfg, n);
        for (const auto& p : rydsense::write_outputs(cfg, result, out_dir)) std::cout << p.string() << '\n';
        return 0;
    } catch (const rydsense::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const rydsense::ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_solver;
    }
}
