#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mzp/experiment.hpp"

namespace {

int execute(mzp::ExperimentConfig config) {
    const mzp::RunReport report = mzp::run(config);
    for (const auto& check : report.checks)
        std::printf("[%s] %-42s measured %.3e  tolerance %.3e\n", check.pass ? "PASS" : "FAIL",
                    check.name.c_str(), check.measured, check.tolerance);
    for (const auto& output : report.outputs) std::printf("wrote %s\n", output.c_str());
    if (!report.all_passed()) {
        std::fprintf(stderr, "one or more invariant checks failed\n");
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal field-ontology simulator of a single photon in a Mach-Zehnder "
                 "interferometer"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "execute the configured scenario");
    run_cmd->add_option("config", config_path, "experiment config file")->required();

    auto* validate_cmd = app.add_subcommand("validate", "check a config and list findings");
    validate_cmd->add_option("config", config_path, "experiment config file")->required();

    std::size_t phi_steps = 25;
    auto* scan_cmd =
        app.add_subcommand("scan", "run an interference scan over the phase shifter");
    scan_cmd->add_option("config", config_path, "experiment config file")->required();
    scan_cmd->add_option("--phi-steps", phi_steps, "number of phase samples in [0, pi]");

    CLI11_PARSE(app, argc, argv);

    try {
        mzp::ExperimentConfig config = mzp::load_experiment_config(config_path);
        if (validate_cmd->parsed()) {
            const auto findings = mzp::validate(config);
            for (const auto& finding : findings)
                std::printf("%s: %s\n", finding.path.c_str(), finding.message.c_str());
            if (findings.empty()) std::printf("config OK\n");
            return findings.empty() ? 0 : 1;
        }
        if (scan_cmd->parsed()) {
            config.scenario = mzp::Scenario::InterferenceScan;
            config.phi_steps = phi_steps;
        }
        return execute(std::move(config));
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    }
}
