// ofdmici: OFDM channel/ICI coefficients, analytic BEP and capacity
// bounds, Monte-Carlo BER validation and ICI normality statistics for
// deterministic doubly-selective channels.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ofdmici/error.hpp"
#include "ofdmici/version.hpp"
#include "scenario.hpp"
#include "studies.hpp"

namespace {

struct GlobalArgs {
    std::string scenario_path;
    std::string out_dir;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    bool paper_scale = false;
};

std::string env_or_empty(const char* name) {
    const char* value = std::getenv(name);
    return value ? std::string(value) : std::string();
}

int run_study_command(const std::string& study, const GlobalArgs& args) {
    ofdmici::cli::Scenario scenario =
        ofdmici::cli::parse_scenario_file(args.scenario_path, study);
    if (args.seed_set) scenario.seed = args.seed;
    if (args.format == "json") scenario.output.json_mirror = true;
    if (args.format == "csv") scenario.output.json_mirror = false;

    ofdmici::cli::RunOptions options;
    options.paper_scale = args.paper_scale;

    // Precedence: flag, then environment, then the scenario document.
    options.out_dir = args.out_dir;
    if (options.out_dir.empty()) options.out_dir = env_or_empty("OFDMICI_OUT");

    options.threads = args.threads;
    if (options.threads <= 0) {
        const std::string env_threads = env_or_empty("OFDMICI_THREADS");
        if (!env_threads.empty()) options.threads = std::atoi(env_threads.c_str());
    }

    const auto written = ofdmici::cli::run_scenario(scenario, options);
    for (const auto& path : written) std::cout << path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"OFDM ICI coefficients, analytic BEP/capacity bounds and Monte-Carlo "
                 "BER studies for deterministic doubly-selective channels"};
    app.set_version_flag("--version", std::string("ofdmici ") + ofdmici::kVersion);
    app.require_subcommand(1);

    GlobalArgs args;
    app.add_option("--scenario", args.scenario_path, "Scenario or manifest file (JSON)");
    app.add_option("--seed", args.seed, "Override the scenario seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    app.add_option("--out", args.out_dir,
                   "Output directory (overrides OFDMICI_OUT and the scenario)");
    app.add_option("--threads", args.threads,
                   "Worker threads (overrides OFDMICI_THREADS; default: all cores)");
    app.add_option("--format", args.format, "Table formats: csv (default) or json (CSV plus "
                                            "JSON mirrors)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--paper-scale", args.paper_scale,
                 "Use the full-scale realization/iteration defaults instead of desk scale");

    const auto add_study = [&](const char* name, const char* description) {
        CLI::App* cmd = app.add_subcommand(name, description);
        cmd->fallthrough(); // global flags may follow the subcommand
        return cmd;
    };
    add_study("coeffs", "Channel and ICI coefficients plus per-symbol link metrics");
    add_study("normality", "Mardia skewness/kurtosis of the ICI over channel realizations");
    add_study("instant", "Instantaneous BEP vs simulated BER with error factors");
    add_study("sweep", "Average BEP/BER sweeps over Eb/N0 or Doppler grids");
    add_study("validate", "Parse and validate a scenario, then exit");

    CLI11_PARSE(app, argc, argv);

    const std::string subcommand = app.get_subcommands().front()->get_name();
    try {
        if (args.scenario_path.empty()) {
            std::cerr << "error: --scenario <file> is required\n";
            return 2;
        }
        if (subcommand == "validate") {
            const auto scenario = ofdmici::cli::parse_scenario_file(args.scenario_path, "");
            std::cout << "scenario '" << scenario.name << "' ok: study=" << scenario.study
                      << " subcarriers=" << scenario.ofdm.used_subcarriers.size()
                      << " seed=" << scenario.seed << "\n";
            return 0;
        }
        const std::string study = subcommand == "coeffs"       ? "coefficients"
                                  : subcommand == "normality"  ? "normality"
                                  : subcommand == "instant"    ? "instantaneous"
                                                               : "average_sweep";
        return run_study_command(study, args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
