#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mzp/core.hpp"
#include "mzp/modes.hpp"

namespace mzp {

enum class Scenario { InputOnly, RegionI, WhichPath, InterferenceScan };

std::string scenario_name(Scenario scenario);

// Declarative run description. Sections and keys are documented in the README;
// physics constants default to natural units and nothing else is defaulted
// silently at run time (validate() reports what a scenario needs).
struct ExperimentConfig {
    // [geometry]
    double box_length = kTwoPi;
    int cutoff = 1;

    // [physics]
    PhysicsConstants physics;
    int polarization = 2;

    // [interferometer]
    double phi = 0.0;
    std::string circuit = "standard-mzi";  // literal or a path to a circuit file

    // [sampling]
    std::uint64_t seed = 1;
    std::size_t ensemble = 8;
    int threads = 0;  // 0: library default; MZPHOTON_THREADS overrides

    // [scenario]
    Scenario scenario = Scenario::InterferenceScan;
    double periods = 10.0;
    std::size_t phi_steps = 25;
    std::size_t samples_per_period = 100;
    std::size_t grid_resolution = 8;
    std::size_t time_samples = 32;

    // [detector]
    double reduced_mass = 1.0;
    double charge = 1.0;
    double ionization_energy = -1.0;  // < 0: hydrogenic hbar^2/(2 mu a^2)
    double interaction_time = -1.0;   // < 0: scaled from the on-shell energy
    std::size_t energy_samples = 4096;
    double energy_window_lobes = 60.0;
    std::size_t angular_samples = 64;

    // [output]
    std::string output_directory = "out";

    // [tolerances]
    double node_tolerance = 1e-12;
    double integrator_rel = 1e-12;
    double integrator_abs = 1e-14;
    double oracle_tolerance = 1e-8;
    double interference_tolerance = 1e-9;
    double extinction_tolerance = 1e-12;
    double classical_tolerance = 1e-5;
    double residual_tolerance = 1e-8;
    double quadrature_tolerance = 1e-6;
    double frequency_chain_tolerance = 1e-12;

    std::vector<std::string> unknown_keys;  // collected for validation findings
};

// Parses the sectioned key=value format; throws on malformed syntax.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

struct Finding {
    std::string path;     // e.g. "geometry.cutoff"
    std::string message;
};

// Actionable findings; empty means the config can run.
std::vector<Finding> validate(const ExperimentConfig& config);

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct RunReport {
    Scenario scenario = Scenario::InputOnly;
    std::vector<CheckResult> checks;
    std::vector<std::string> outputs;

    bool all_passed() const;
};

// Executes the configured scenario: sample initial conditions, build region
// states, integrate, evaluate beables, run the scenario-specific analysis and
// write datasets plus a run_report.json. Deterministic for a fixed seed.
RunReport run(const ExperimentConfig& config);

void write_run_report_json(const std::string& path, const RunReport& report);

}  // namespace mzp
