// Command-line entry point.
//
//   abq run <scenario> --config <path> [--out <dir>]
//   abq list-scenarios
//   abq selftest
//
// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 configuration or
// scenario precondition error, 3 numerical failure, 4 I/O failure.

#include "abq/config.hpp"
#include "abq/errors.hpp"
#include "abq/io.hpp"
#include "abq/scenarios.hpp"
#include "selftest.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw abq::IoError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& scenario, const std::string& config_path, const std::string& out_dir) {
    abq::ScenarioConfig cfg = abq::parse_config(read_file(config_path));
    if (cfg.scenario != scenario) {
        throw abq::ConfigError("config file is for scenario '" + cfg.scenario + "', not '" +
                               scenario + "'");
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    const abq::ScenarioReport report = abq::run_scenario(cfg);
    abq::write_outputs(report, cfg, cfg.output_dir);
    for (const abq::Verdict& v : report.verdicts) {
        std::printf("%-4s %s: measured %.6g %s %.3g\n", v.pass ? "PASS" : "FAIL", v.name.c_str(),
                    v.measured, v.comparison == abq::Comparison::at_most ? "<=" : ">", v.tolerance);
    }
    std::printf("%s: %s (outputs in %s)\n", scenario.c_str(),
                report.passed() ? "all verdicts pass" : "verdict failure", cfg.output_dir.c_str());
    return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gauge-aware quantum dynamics simulator"};
    app.require_subcommand(1);

    std::string scenario;
    std::string config_path;
    std::string out_dir;
    CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario from a config file");
    run_cmd->add_option("scenario", scenario, "Scenario name")->required();
    run_cmd->add_option("--config", config_path, "Config file (key=value)")->required();
    run_cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    CLI::App* list_cmd = app.add_subcommand("list-scenarios", "Print the scenario names");
    CLI::App* self_cmd = app.add_subcommand("selftest", "Run the built-in example checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*list_cmd) {
            for (const auto& name : abq::scenario_names()) std::printf("%s\n", name.c_str());
            return 0;
        }
        if (*self_cmd) return abq_tools::run_selftest() ? 0 : 1;
        if (*run_cmd) return run(scenario, config_path, out_dir);
    } catch (const abq::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const abq::ScenarioError& e) {
        std::fprintf(stderr, "scenario precondition violated: %s\n", e.what());
        return 2;
    } catch (const abq::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const abq::IoError& e) {
        std::fprintf(stderr, "I/O failure: %s\n", e.what());
        return 4;
    }
    return 0;
}
