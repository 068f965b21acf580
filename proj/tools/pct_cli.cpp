// Scenario runner CLI: run a scenario config, sweep a parameter, or list
// the bundled suite.  Exit codes: 0 = all expectations met, 1 =
// expectation failure, 2 = config or runtime error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pct/scenarios.hpp"

namespace {

pct::ScenarioConfig resolve_config(const std::string& config_arg) {
    if (std::filesystem::exists(config_arg)) {
        return pct::load_config_file(config_arg);
    }
    // Bare scenario name: run with the bundled defaults.
    pct::find_scenario(config_arg);
    pct::ScenarioConfig config;
    config.scenario = config_arg;
    return config;
}

std::filesystem::path resolve_out_dir(const pct::ScenarioConfig& config,
                                      const std::string& cli_out) {
    if (!cli_out.empty()) return cli_out;
    if (!config.out_dir.empty()) return config.out_dir;
    if (const char* env = std::getenv("PCT_OUT_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return "out";
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> values;
    std::stringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stod(item));
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perceptual-control simulation harness"};
    app.require_subcommand(1);

    std::string config_arg;
    std::string out_dir_arg;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string seed_range;

    auto* run_cmd = app.add_subcommand("run", "run a scenario config");
    run_cmd->add_option("config", config_arg, "config file or bundled scenario name")->required();
    run_cmd->add_option("--seed", seed, "single seed")->each([&](const std::string&) {
        seed_set = true;
    });
    run_cmd->add_option("--seeds", seed_range, "seed range N..M");
    run_cmd->add_option("--out", out_dir_arg, "output directory");

    std::string param_path;
    std::string values_csv;
    auto* sweep_cmd = app.add_subcommand("sweep", "run a scenario per parameter value");
    sweep_cmd->add_option("config", config_arg, "config file or bundled scenario name")->required();
    sweep_cmd->add_option("--param", param_path, "dotted parameter path, e.g. params.kp")
        ->required();
    sweep_cmd->add_option("--values", values_csv, "comma-separated values")->required();
    sweep_cmd->add_option("--out", out_dir_arg, "output directory");

    auto* list_cmd = app.add_subcommand("list", "list bundled scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const auto& def : pct::scenario_registry()) {
                std::cout << def.name << "  -  " << def.description << '\n';
            }
            return 0;
        }

        pct::ScenarioConfig config = resolve_config(config_arg);
        if (seed_set) {
            config.seed_from = config.seed_to = seed;
            config.seeds_set = true;
        }
        if (!seed_range.empty()) {
            const auto sep = seed_range.find("..");
            if (sep == std::string::npos) {
                throw pct::config_error("--seeds expects the form N..M");
            }
            config.seed_from = std::stoull(seed_range.substr(0, sep));
            config.seed_to = std::stoull(seed_range.substr(sep + 2));
            config.seeds_set = true;
        }
        const std::filesystem::path out_dir = resolve_out_dir(config, out_dir_arg);

        if (sweep_cmd->parsed()) {
            const auto values = parse_values(values_csv);
            const auto rows = pct::sweep(config, param_path, values);
            std::filesystem::create_directories(out_dir);
            pct::write_sweep_csv(out_dir / (config.scenario + "_sweep.csv"), rows);
            bool all_pass = true;
            for (const auto& row : rows) all_pass = all_pass && row.pass;
            std::cout << (all_pass ? "PASS" : "FAIL") << ": " << rows.size()
                      << " rows written to " << (out_dir / (config.scenario + "_sweep.csv"))
                      << '\n';
            return all_pass ? 0 : 1;
        }

        const pct::ScenarioResult result = pct::run_scenario(config);
        pct::write_outputs(result, config.scenario, out_dir);
        for (const auto& check : result.summary.at("checks")) {
            std::cout << (check.at("pass").get<bool>() ? "PASS" : "FAIL") << ": "
                      << check.at("expectation").get<std::string>() << '\n';
        }
        std::cout << (result.pass ? "PASS" : "FAIL") << ": " << config.scenario << '\n';
        return result.pass ? 0 : 1;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 2;
    }
}
