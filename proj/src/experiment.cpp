#include "mzp/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "mzp/beables.hpp"
#include "mzp/circuit_parser.hpp"
#include "mzp/detection.hpp"
#include "mzp/export.hpp"
#include "mzp/guidance.hpp"
#include "mzp/intensity_operator.hpp"
#include "mzp/optics.hpp"
#include "mzp/sampling.hpp"
#include "mzp/wavefunctional.hpp"

namespace mzp {

std::string scenario_name(Scenario scenario) {
    switch (scenario) {
        case Scenario::InputOnly: return "input-only";
        case Scenario::RegionI: return "region-I";
        case Scenario::WhichPath: return "which-path";
        case Scenario::InterferenceScan: return "interference-scan";
    }
    return "unknown";
}

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

Scenario parse_scenario(const std::string& value, int line) {
    if (value == "input-only") return Scenario::InputOnly;
    if (value == "region-I") return Scenario::RegionI;
    if (value == "which-path") return Scenario::WhichPath;
    if (value == "interference-scan") return Scenario::InterferenceScan;
    throw std::runtime_error("line " + std::to_string(line) + ": unknown scenario '" + value + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig config;
    std::istringstream stream(text);
    std::string raw;
    std::string section;
    int line_number = 0;

    while (std::getline(stream, raw)) {
        ++line_number;
        std::string line = trim(raw);
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = trim(line.substr(0, comment));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("line " + std::to_string(line_number) +
                                         ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(line_number) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string path = section.empty() ? key : section + "." + key;

        auto as_double = [&]() { return std::stod(value); };
        auto as_int = [&]() { return std::stoi(value); };
        auto as_size = [&]() { return static_cast<std::size_t>(std::stoull(value)); };

        try {
            if (path == "geometry.box_length") config.box_length = as_double();
            else if (path == "geometry.cutoff") config.cutoff = as_int();
            else if (path == "physics.hbar") config.physics.hbar = as_double();
            else if (path == "physics.c") config.physics.c = as_double();
            else if (path == "physics.polarization") config.polarization = as_int();
            else if (path == "interferometer.phi") config.phi = parse_phase_expression(value);
            else if (path == "interferometer.circuit") config.circuit = value;
            else if (path == "sampling.seed") config.seed = std::stoull(value);
            else if (path == "sampling.ensemble") config.ensemble = as_size();
            else if (path == "sampling.threads") config.threads = as_int();
            else if (path == "scenario.kind") config.scenario = parse_scenario(value, line_number);
            else if (path == "scenario.periods") config.periods = as_double();
            else if (path == "scenario.phi_steps") config.phi_steps = as_size();
            else if (path == "scenario.samples_per_period") config.samples_per_period = as_size();
            else if (path == "scenario.grid_resolution") config.grid_resolution = as_size();
            else if (path == "scenario.time_samples") config.time_samples = as_size();
            else if (path == "detector.reduced_mass") config.reduced_mass = as_double();
            else if (path == "detector.charge") config.charge = as_double();
            else if (path == "detector.ionization_energy") config.ionization_energy = as_double();
            else if (path == "detector.interaction_time") config.interaction_time = as_double();
            else if (path == "detector.energy_samples") config.energy_samples = as_size();
            else if (path == "detector.energy_window_lobes") config.energy_window_lobes = as_double();
            else if (path == "detector.angular_samples") config.angular_samples = as_size();
            else if (path == "output.directory") config.output_directory = value;
            else if (path == "tolerances.node") config.node_tolerance = as_double();
            else if (path == "tolerances.integrator_rel") config.integrator_rel = as_double();
            else if (path == "tolerances.integrator_abs") config.integrator_abs = as_double();
            else if (path == "tolerances.oracle") config.oracle_tolerance = as_double();
            else if (path == "tolerances.interference") config.interference_tolerance = as_double();
            else if (path == "tolerances.extinction") config.extinction_tolerance = as_double();
            else if (path == "tolerances.classical") config.classical_tolerance = as_double();
            else if (path == "tolerances.residual") config.residual_tolerance = as_double();
            else if (path == "tolerances.quadrature") config.quadrature_tolerance = as_double();
            else if (path == "tolerances.frequency_chain")
                config.frequency_chain_tolerance = as_double();
            else config.unknown_keys.push_back(path);
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("line " + std::to_string(line_number) +
                                     ": cannot parse value '" + value + "' for " + path);
        }
    }
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config(buffer.str());
}

std::vector<Finding> validate(const ExperimentConfig& config) {
    std::vector<Finding> findings;
    auto add = [&](const std::string& path, const std::string& message) {
        findings.push_back(Finding{path, message});
    };

    if (config.box_length <= 0.0) add("geometry.box_length", "must be positive");
    if (config.cutoff < 1) add("geometry.cutoff", "empty lattice: cutoff must be >= 1");
    if (config.physics.hbar <= 0.0) add("physics.hbar", "must be positive");
    if (config.physics.c <= 0.0) add("physics.c", "must be positive");
    if (config.polarization != 1 && config.polarization != 2)
        add("physics.polarization", "must be 1 or 2");
    if (config.ensemble < 1) add("sampling.ensemble", "need at least one ensemble member");
    if (config.periods <= 0.0) add("scenario.periods", "must be positive");
    if (config.samples_per_period < 4) add("scenario.samples_per_period", "must be >= 4");
    if (config.scenario == Scenario::InterferenceScan) {
        if (config.phi_steps < 2) add("scenario.phi_steps", "need at least 2 phase samples");
        if (config.grid_resolution < 2 * static_cast<std::size_t>(std::max(config.cutoff, 1)) + 2)
            add("scenario.grid_resolution",
                "rectangle rule needs more than twice the cutoff frequency");
        if (config.time_samples < 8) add("scenario.time_samples", "must be >= 8");
    }

    const std::pair<const char*, double> tolerances[] = {
        {"tolerances.node", config.node_tolerance},
        {"tolerances.integrator_rel", config.integrator_rel},
        {"tolerances.integrator_abs", config.integrator_abs},
        {"tolerances.oracle", config.oracle_tolerance},
        {"tolerances.interference", config.interference_tolerance},
        {"tolerances.extinction", config.extinction_tolerance},
        {"tolerances.classical", config.classical_tolerance},
        {"tolerances.residual", config.residual_tolerance},
        {"tolerances.quadrature", config.quadrature_tolerance},
        {"tolerances.frequency_chain", config.frequency_chain_tolerance},
    };
    for (const auto& [path, value] : tolerances)
        if (value <= 0.0) add(path, "tolerances must be positive");

    // Circuit must parse and, for scenario runs, use the standard beam labels.
    if (config.circuit != "standard-mzi") {
        try {
            std::ifstream in(config.circuit);
            if (!in) {
                add("interferometer.circuit", "cannot open circuit file '" + config.circuit + "'");
            } else {
                std::stringstream buffer;
                buffer << in.rdbuf();
                const CircuitDescription circuit = parse_circuit(buffer.str());
                const BeamModeMap beam_modes = standard_beam_mode_map(config.polarization);
                const BeamAmplitudes final_beams =
                    fold_circuit(circuit, config.phi, circuit.elements.size());
                for (const auto& [label, amp] : final_beams)
                    if (!beam_modes.count(label))
                        add("interferometer.circuit",
                            "beam '" + label + "' has no mode assignment (use standard labels)");
            }
        } catch (const std::exception& ex) {
            add("interferometer.circuit", ex.what());
        }
    }

    if (config.scenario == Scenario::WhichPath) {
        if (config.reduced_mass <= 0.0) add("detector.reduced_mass", "must be positive");
        if (config.charge == 0.0) add("detector.charge", "must be nonzero");
        if (config.energy_samples < 64) add("detector.energy_samples", "must be >= 64");
        if (config.energy_window_lobes < 4.0)
            add("detector.energy_window_lobes", "need at least a few side lobes");
        if (config.angular_samples < 8) add("detector.angular_samples", "must be >= 8");
        // The quantum must be able to ionize the atom.
        if (config.reduced_mass > 0.0 && config.charge != 0.0) {
            DetectorAtom atom =
                DetectorAtom::hydrogenic(config.reduced_mass, config.charge, config.physics);
            if (config.ionization_energy > 0.0) atom.ionization_energy = config.ionization_energy;
            const double kappa0 = kTwoPi / config.box_length;
            if (config.physics.hbar * config.physics.c * kappa0 <= atom.ionization_energy)
                add("detector.ionization_energy",
                    "quantum energy hbar*c*kappa0 does not exceed the ionization energy");
        }
    }

    for (const std::string& key : config.unknown_keys) add(key, "unknown configuration key");
    return findings;
}

bool RunReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

namespace {

struct ScenarioSetup {
    std::shared_ptr<const ModeSet> modes;
    CircuitDescription circuit;
    BeamModeMap beam_modes;
    double kappa0 = 0.0;
    Vec3 polarization;
    Vec3 k_out_c;
    Vec3 k_out_d;
};

ScenarioSetup make_setup(const ExperimentConfig& config) {
    ScenarioSetup setup;
    setup.modes = std::make_shared<const ModeSet>(
        ModeSet::build(BoxGeometry{config.box_length, config.cutoff}));
    if (config.circuit == "standard-mzi") {
        setup.circuit = standard_mzi_circuit();
    } else {
        std::ifstream in(config.circuit);
        std::stringstream buffer;
        buffer << in.rdbuf();
        setup.circuit = parse_circuit(buffer.str());
    }
    setup.beam_modes = standard_beam_mode_map(config.polarization);
    const ModeEntry& input_entry =
        setup.modes->entry(*setup.modes->find(setup.beam_modes.at("in")));
    setup.kappa0 = input_entry.kappa;
    setup.polarization = input_entry.polarization;
    setup.k_out_c = setup.modes->entry(*setup.modes->find(setup.beam_modes.at("c"))).k;
    setup.k_out_d = setup.modes->entry(*setup.modes->find(setup.beam_modes.at("d"))).k;
    return setup;
}

struct Member {
    FieldConfiguration background;
    PhotonModeSample photon;
    MatchedConstants constants;
};

std::vector<Member> sample_members(const ScenarioSetup& setup, const ExperimentConfig& config) {
    std::vector<Member> members;
    members.reserve(config.ensemble);
    for (std::size_t m = 0; m < config.ensemble; ++m) {
        Member member;
        member.background = sample_ground_configuration(
            setup.modes, config.physics, derive_seed(config.seed, 2 * m));
        member.photon = sample_photon_mode(setup.kappa0, config.physics,
                                           derive_seed(config.seed, 2 * m + 1));
        member.constants = match_constants(member.photon.amplitude, member.photon.phase,
                                           config.phi, config.physics, setup.beam_modes);
        members.push_back(std::move(member));
    }
    return members;
}

void add_check(RunReport& report, const std::string& name, double measured, double tolerance) {
    report.checks.push_back(CheckResult{name, measured, tolerance, measured <= tolerance});
}

void add_lower_bound_check(RunReport& report, const std::string& name, double measured,
                           double minimum) {
    report.checks.push_back(CheckResult{name, measured, minimum, measured > minimum});
}

// Shared by the input-region and two-arm scenarios.
void run_free_propagation(const ExperimentConfig& config, const ScenarioSetup& setup,
                          const std::vector<Member>& members, Region region, RunReport& report,
                          const std::filesystem::path& out_dir) {
    const PhotonState state =
        region_state(setup.circuit, config.phi, region, setup.modes, setup.beam_modes);

    IntegratorControls controls;
    controls.rel_tol = config.integrator_rel;
    controls.abs_tol = config.integrator_abs;
    controls.node_tolerance = config.node_tolerance;
    controls.samples = static_cast<std::size_t>(
        std::ceil(config.periods * static_cast<double>(config.samples_per_period)));

    std::vector<Trajectory> trajectories(members.size());
    const std::int64_t count = static_cast<std::int64_t>(members.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t m = 0; m < count; ++m) {
        const RegionConstants& constants = members[m].constants.at(region);
        const double period = kTwoPi / constants.omega;
        IntegratorControls local = controls;
        local.max_step = period / 50.0;
        const FieldConfiguration config0 =
            analytic_solution(constants, members[m].background, 0.0);
        trajectories[m] =
            integrate(state, config0, config.periods * period, local, config.physics);
    }

    double oracle_error = 0.0;
    double amplitude_drift = 0.0;
    double q_drift = 0.0;
    double min_node_distance = std::numeric_limits<double>::infinity();
    double ratio_drift = 0.0;
    bool any_node_event = false;
    for (std::size_t m = 0; m < members.size(); ++m) {
        const Trajectory& trajectory = trajectories[m];
        const RegionConstants& constants = members[m].constants.at(region);
        any_node_event = any_node_event || trajectory.diagnostics.node_event;
        const auto& excited = state.excited();
        for (std::size_t s = 0; s < trajectory.sample_count(); ++s) {
            const FieldConfiguration exact =
                analytic_solution(constants, members[m].background, trajectory.times[s]);
            for (std::size_t j = 0; j < excited.size(); ++j) {
                const double amp = std::abs(members[m].photon.amplitude *
                                            std::abs(excited[j].coeff));
                if (amp < 1e-14) continue;
                const Complex numeric = trajectory.excited_coords[s][j];
                const Complex reference = exact.coordinate(excited[j].entry);
                oracle_error = std::max(oracle_error, std::abs(numeric - reference) / amp);
                amplitude_drift =
                    std::max(amplitude_drift, std::abs(std::abs(numeric) - amp) / amp);
            }
            min_node_distance =
                std::min(min_node_distance, trajectory.diagnostics.node_distance[s]);
            q_drift = std::max(q_drift, std::abs(trajectory.diagnostics.quantum_potential[s] -
                                                 trajectory.diagnostics.quantum_potential[0]));
            ratio_drift = std::max(ratio_drift, trajectory.diagnostics.ratio_drift[s]);
        }
    }

    add_check(report, "guidance-vs-analytic-oracle", oracle_error, config.oracle_tolerance);
    add_check(report, "amplitude-constancy", amplitude_drift, config.oracle_tolerance);
    add_check(report, "quantum-potential-drift", q_drift, 1e-10);
    add_check(report, "node-events", any_node_event ? 1.0 : 0.0, 0.5);
    add_lower_bound_check(report, "node-distance-margin", min_node_distance,
                          config.node_tolerance);

    // Reality of the reconstructed vector potential at sampled spacetime points.
    double imag_residue = 0.0;
    Rng rng(derive_seed(config.seed, 9001));
    const double side = setup.modes->geometry().side_length;
    for (int probe = 0; probe < 16; ++probe) {
        const Vec3 x{side * rng.uniform(), side * rng.uniform(), side * rng.uniform()};
        const std::size_t s =
            static_cast<std::size_t>(rng.uniform() *
                                     static_cast<double>(trajectories[0].sample_count()));
        const FieldConfiguration snapshot_config = trajectories[0].configuration_at(
            std::min(s, trajectories[0].sample_count() - 1));
        for (int component = 0; component < 3; ++component)
            imag_residue = std::max(
                imag_residue,
                std::abs(vector_potential_component_site_sum(snapshot_config, x, component)
                             .imag()));
    }
    add_check(report, "vector-potential-reality", imag_residue, 1e-12);

    if (region == Region::I) {
        add_check(report, "decoupling-ratio-conservation", ratio_drift, config.oracle_tolerance);

        // Nonlocal arm coupling: the rate of one arm responds to the other arm's value.
        const RegionConstants& constants = members[0].constants.at(region);
        const FieldConfiguration config0 =
            analytic_solution(constants, members[0].background, 0.0);
        const std::vector<Complex> baseline =
            guidance_rhs(state, config0, config.physics, config.node_tolerance);
        FieldConfiguration perturbed = config0;
        const std::size_t beta_entry = state.excited().back().entry;
        perturbed.set_coordinate(beta_entry,
                                 perturbed.coordinate(beta_entry) + Complex{1e-3, 0.0});
        const std::vector<Complex> shifted =
            guidance_rhs(state, perturbed, config.physics, config.node_tolerance);
        add_lower_bound_check(report, "nonlocal-arm-sensitivity",
                              std::abs(shifted.front() - baseline.front()), 1e-12);

        // Second-order equation of motion on the analytic trajectory.
        const double period = kTwoPi / constants.omega;
        const Trajectory exact = analytic_trajectory(state, constants, members[0].background,
                                                     period, 1000, config.physics);
        add_check(report, "wave-equation-residual",
                  wave_equation_residual(state, exact, config.physics).max_residual,
                  config.residual_tolerance);

        // E = -(1/c) dA/dt and B = curl A under central differences.
        std::vector<Vec3> points;
        for (int probe = 0; probe < 6; ++probe)
            points.push_back(
                Vec3{side * rng.uniform(), side * rng.uniform(), side * rng.uniform()});
        const ClassicalRelationDefects defects = check_classical_relations(
            state, exact, points, side / 1000.0, config.physics);
        add_check(report, "classical-relation-electric", defects.electric,
                  config.classical_tolerance);
        add_check(report, "classical-relation-magnetic", defects.magnetic,
                  config.classical_tolerance);
    }

    const std::string label = region == Region::I ? "region_i" : "input";
    const std::string trajectory_path = (out_dir / (label + "_trajectory.csv")).string();
    write_trajectory_csv(trajectory_path, trajectories[0]);
    report.outputs.push_back(trajectory_path);

    // A beable snapshot on a coarse slice for member 0 at the final time.
    const FieldConfiguration last =
        trajectories[0].configuration_at(trajectories[0].sample_count() - 1);
    GridSpec slice;
    slice.origin = Vec3{0.0, 0.0, 0.0};
    slice.step = Vec3{side / 16.0, side / 16.0, side};
    slice.nx = slice.ny = 16;
    slice.nz = 1;
    const FieldSnapshot snapshot =
        evaluate_beables(state, last, slice.points(), config.physics, config.node_tolerance);
    const std::string snapshot_path = (out_dir / (label + "_snapshot.csv")).string();
    write_snapshot_csv(snapshot_path, snapshot);
    report.outputs.push_back(snapshot_path);
    const std::string snapshot_json_path = (out_dir / (label + "_snapshot.json")).string();
    write_snapshot_json(snapshot_json_path, snapshot);
    report.outputs.push_back(snapshot_json_path);
}

void run_which_path(const ExperimentConfig& config, const ScenarioSetup& setup,
                    const std::vector<Member>& members, RunReport& report,
                    const std::filesystem::path& out_dir) {
    const PhotonState state =
        region_state(setup.circuit, config.phi, Region::I, setup.modes, setup.beam_modes);

    // Propagate the arm beable up to the interaction window.
    {
        const RegionConstants& constants = members[0].constants.at(Region::I);
        const double period = kTwoPi / constants.omega;
        IntegratorControls controls;
        controls.rel_tol = config.integrator_rel;
        controls.abs_tol = config.integrator_abs;
        controls.node_tolerance = config.node_tolerance;
        controls.max_step = period / 50.0;
        controls.samples = static_cast<std::size_t>(
            std::ceil(config.periods * static_cast<double>(config.samples_per_period)));
        const Trajectory trajectory =
            integrate(state, analytic_solution(constants, members[0].background, 0.0),
                      config.periods * period, controls, config.physics);
        double oracle_error = 0.0;
        for (std::size_t s = 0; s < trajectory.sample_count(); ++s) {
            const FieldConfiguration exact =
                analytic_solution(constants, members[0].background, trajectory.times[s]);
            for (std::size_t j = 0; j < state.excited().size(); ++j) {
                const std::size_t entry = state.excited()[j].entry;
                const double amp = std::abs(exact.coordinate(entry));
                if (amp < 1e-14) continue;
                oracle_error = std::max(
                    oracle_error,
                    std::abs(trajectory.excited_coords[s][j] - exact.coordinate(entry)) / amp);
            }
        }
        add_check(report, "guidance-vs-analytic-oracle", oracle_error, config.oracle_tolerance);
        const std::string trajectory_path = (out_dir / "arm_trajectory.csv").string();
        write_trajectory_csv(trajectory_path, trajectory);
        report.outputs.push_back(trajectory_path);
    }

    DetectorAtom atom =
        DetectorAtom::hydrogenic(config.reduced_mass, config.charge, config.physics, "C1");
    if (config.ionization_energy > 0.0) atom.ionization_energy = config.ionization_energy;

    const double hbar = config.physics.hbar;
    const double on_shell_energy =
        hbar * config.physics.c * setup.kappa0 - atom.ionization_energy;
    const double t = config.interaction_time > 0.0
                         ? config.interaction_time
                         : 1000.0 * kPi * hbar / on_shell_energy;
    const double lobe = kTwoPi * hbar / t;
    const double window = config.energy_window_lobes * lobe;
    if (window >= on_shell_energy)
        throw std::runtime_error("which-path: energy window reaches below zero kinetic energy; "
                                 "increase interaction_time or reduce energy_window_lobes");

    const std::size_t n_channels = config.energy_samples | 1;  // odd: midpoint on shell
    const std::vector<ElectronChannel> channels =
        energy_scan_channels(atom, setup.polarization, on_shell_energy - window,
                             on_shell_energy + window, n_channels, config.physics);
    const double de = 2.0 * window / static_cast<double>(n_channels - 1);
    std::vector<double> weights(n_channels, de);
    weights.front() = 0.5 * de;
    weights.back() = 0.5 * de;

    const DetectionResult result = absorption_probability(atom, channels, weights, state,
                                                          setup.polarization, t, config.physics);
    const DetectionResult doubled = absorption_probability(
        atom, channels, weights, state, setup.polarization, 2.0 * t, config.physics);

    // Two-beam interference factor.
    const double expected_modulus = 2.0 * (1.0 - std::sin(config.phi));
    add_check(report, "which-path-factor",
              std::abs(which_path_modulus_squared(state) - expected_modulus), 1e-12);

    // Main lobe of the transition-probability profile: first zeros at
    // on-shell energy +- 2 pi hbar / t.
    const std::size_t mid = n_channels / 2;
    auto locate_minimum = [&](bool above) {
        std::size_t best = mid;
        double best_density = std::numeric_limits<double>::infinity();
        const double target =
            on_shell_energy + (above ? lobe : -lobe);
        for (std::size_t i = 0; i < n_channels; ++i) {
            const double energy = channels[i].kinetic_energy;
            if (std::abs(energy - target) > 0.5 * lobe) continue;
            if (result.probability_density[i] < best_density) {
                best_density = result.probability_density[i];
                best = i;
            }
        }
        return channels[best].kinetic_energy;
    };
    const double upper_zero = locate_minimum(true);
    const double lower_zero = locate_minimum(false);
    const double width_error =
        std::max(std::abs(upper_zero - on_shell_energy - lobe),
                 std::abs(lower_zero - on_shell_energy + lobe)) /
        lobe;
    add_check(report, "sinc-main-lobe-width", width_error, 0.02);

    // Shape across the main lobe against sinc^2 normalized to the on-shell peak.
    const double peak = result.probability_density[mid];
    double shape_defect = 0.0;
    for (std::size_t i = 0; i < n_channels; ++i) {
        const double offset = channels[i].kinetic_energy - on_shell_energy;
        if (std::abs(offset) > lobe) continue;
        const double phase = 0.5 * offset * t / hbar;
        const double sinc = phase == 0.0 ? 1.0 : std::sin(phase) / phase;
        shape_defect =
            std::max(shape_defect, std::abs(result.probability_density[i] / peak - sinc * sinc));
    }
    add_check(report, "sinc-profile-shape", shape_defect, 0.02);

    // Fermi-golden-rule regime: integrated probability grows linearly in t.
    add_check(report, "golden-rule-linearity",
              std::abs(doubled.total_probability / (2.0 * result.total_probability) - 1.0), 0.02);
    add_check(report, "perturbative-regime", result.total_probability, 1e-2);

    // Quadratic short-time growth of the on-shell channel.
    const ElectronChannel shell =
        on_shell_channel(atom, setup.polarization, setup.kappa0, config.physics);
    const double t_small = 0.01 * hbar / on_shell_energy;
    const double p1 = std::norm(
        transition_amplitude(atom, shell, state, setup.polarization, t_small, config.physics));
    const double p2 = std::norm(transition_amplitude(atom, shell, state, setup.polarization,
                                                     2.0 * t_small, config.physics));
    add_check(report, "short-time-quadratic-growth", std::abs(p2 / p1 - 4.0), 1e-6);

    // Whole-quantum absorption: the field component afterwards is the vacuum.
    const PostAbsorptionState post = post_absorption_state(state, shell);
    const PhotonState vacuum = PhotonState::vacuum(setup.modes);
    add_check(report, "post-absorption-vacuum-overlap",
              std::abs(state_overlap(vacuum, post.field) - Complex{1.0, 0.0}), 1e-15);
    add_check(report, "post-absorption-photon-overlap",
              std::abs(state_overlap(state, post.field)), 1e-15);
    add_check(report, "post-absorption-guidance-quiescent",
              static_cast<double>(
                  grad_s(post.field, members[0].background, config.physics).size()),
              0.5);

    // Angular distribution on the energy shell.
    const std::vector<ElectronChannel> angular = angular_scan_channels(
        atom, setup.polarization, setup.k_out_c, setup.kappa0, config.angular_samples,
        config.physics);
    const std::vector<double> angular_weights(angular.size(), 1.0);
    const DetectionResult angular_result = absorption_probability(
        atom, angular, angular_weights, state, setup.polarization, t, config.physics);
    double cosine_defect = 0.0;
    double angular_peak = 0.0;
    for (const double density : angular_result.probability_density)
        angular_peak = std::max(angular_peak, density);
    std::vector<double> angles(angular.size());
    for (std::size_t i = 0; i < angular.size(); ++i) {
        angles[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(angular.size());
        const double expected = std::cos(angles[i]) * std::cos(angles[i]);
        if (angular_peak > 0.0)
            cosine_defect = std::max(
                cosine_defect,
                std::abs(angular_result.probability_density[i] / angular_peak - expected));
    }
    add_check(report, "angular-cosine-squared", cosine_defect, 1e-9);

    DetectionReport detection;
    detection.detector_label = atom.position_label;
    detection.phi = config.phi;
    detection.interaction_time = t;
    detection.field_factor = field_matrix_factor(state);
    detection.which_path_modulus_squared = which_path_modulus_squared(state);
    detection.channels = channels;
    detection.result = result;
    detection.vacuum_overlap = std::abs(state_overlap(vacuum, post.field));
    detection.photon_overlap = std::abs(state_overlap(state, post.field));
    const std::string json_path = (out_dir / "detection.json").string();
    write_detection_json(json_path, detection);
    report.outputs.push_back(json_path);

    const std::string angular_path = (out_dir / "detection_angular.csv").string();
    write_angular_csv(angular_path, angles, angular_result.probability_density);
    report.outputs.push_back(angular_path);
}

void run_interference_scan(const ExperimentConfig& config, const ScenarioSetup& setup,
                           const std::vector<Member>& members, RunReport& report,
                           const std::filesystem::path& out_dir) {
    const Member& member = members.front();
    const double v = setup.modes->geometry().volume();
    const double hc2 = config.physics.hbar * config.physics.c * config.physics.c;
    const double intensity_scale = hc2 * setup.kappa0 / v;
    const Vec3 c_hat = normalized(setup.k_out_c);
    const Vec3 d_hat = normalized(setup.k_out_d);

    std::vector<InterferenceRow> rows;
    double law_residual = 0.0;
    double extinction_d_at_zero = 0.0;
    double extinction_c_at_pi = 0.0;

    for (std::size_t step = 0; step < config.phi_steps; ++step) {
        const double phi =
            kPi * static_cast<double>(step) / static_cast<double>(config.phi_steps - 1);
        const PhotonState state =
            region_state(setup.circuit, phi, Region::II, setup.modes, setup.beam_modes);
        const RegionConstants constants =
            match_constants(member.photon.amplitude, member.photon.phase, phi, config.physics,
                            setup.beam_modes)
                .region_ii;
        const Vec3 average =
            box_cycle_average_intensity(state, constants, member.background,
                                        config.grid_resolution, config.time_samples,
                                        config.physics);
        const double intensity_c = dot(average, c_hat);
        const double intensity_d = dot(average, d_hat);
        rows.push_back(InterferenceRow{phi, intensity_c, intensity_d});

        const double expected_c = 0.5 * intensity_scale * (1.0 + std::cos(phi));
        const double expected_d = 0.5 * intensity_scale * (1.0 - std::cos(phi));
        law_residual = std::max(law_residual,
                                std::abs(intensity_c - expected_c) / intensity_scale);
        law_residual = std::max(law_residual,
                                std::abs(intensity_d - expected_d) / intensity_scale);
        if (step == 0) extinction_d_at_zero = std::abs(intensity_d);
        if (step + 1 == config.phi_steps) extinction_c_at_pi = std::abs(intensity_c);
    }

    add_check(report, "interference-law", law_residual, config.interference_tolerance);
    add_check(report, "extinction-d-beam-phi0", extinction_d_at_zero,
              config.extinction_tolerance);
    add_check(report, "extinction-c-beam-phipi", extinction_c_at_pi,
              config.extinction_tolerance);

    // Operator expectation vs cycle-averaged beable at one sampled position.
    {
        const double phi = config.phi;
        const PhotonState state =
            region_state(setup.circuit, phi, Region::II, setup.modes, setup.beam_modes);
        const RegionConstants constants =
            match_constants(member.photon.amplitude, member.photon.phase, phi, config.physics,
                            setup.beam_modes)
                .region_ii;
        Rng rng(derive_seed(config.seed, 7777));
        const double side = setup.modes->geometry().side_length;
        double operator_equivalence = 0.0;
        double operator_vs_beable = 0.0;
        for (int probe = 0; probe < 4; ++probe) {
            const Vec3 x{side * rng.uniform(), side * rng.uniform(), side * rng.uniform()};
            const Vec3 symmetrized = intensity_operator_expectation(
                state, x, IntensityOperatorKind::Symmetrized, config.physics);
            const Vec3 normal_ordered = intensity_operator_expectation(
                state, x, IntensityOperatorKind::NormalOrdered, config.physics);
            operator_equivalence =
                std::max(operator_equivalence, norm(symmetrized - normal_ordered));
            const Vec3 beable_average = cycle_average_intensity(
                state, constants, member.background, x, config.time_samples, config.physics);
            operator_vs_beable = std::max(operator_vs_beable, norm(symmetrized - beable_average));
        }
        add_check(report, "intensity-operator-equivalence", operator_equivalence, 1e-12);
        add_check(report, "operator-vs-cycle-averaged-beable", operator_vs_beable, 1e-9);

        // Momentum bookkeeping at the configured phase.
        const BeamTotals totals = beam_totals(state, constants, config.physics);
        add_check(report, "beam-momentum-sum",
                  std::abs(totals.beam_momentum_sum - config.physics.hbar * setup.kappa0),
                  1e-12);
        const FieldConfiguration snapshot =
            analytic_solution(constants, member.background, 0.0);
        const Vec3 quadrature = momentum_volume_quadrature(
            state, snapshot, std::max<std::size_t>(config.grid_resolution, 8), config.physics);
        add_check(report, "momentum-volume-quadrature",
                  norm(quadrature - totals.momentum) /
                      (config.physics.hbar * setup.kappa0),
                  config.quadrature_tolerance);
    }

    const std::string csv_path = (out_dir / "interference.csv").string();
    write_interference_csv(csv_path, rows);
    report.outputs.push_back(csv_path);
}

}  // namespace

RunReport run(const ExperimentConfig& config) {
    const std::vector<Finding> findings = validate(config);
    if (!findings.empty()) {
        std::string message = "configuration is invalid:";
        for (const auto& finding : findings)
            message += "\n  " + finding.path + ": " + finding.message;
        throw std::runtime_error(message);
    }

#ifdef _OPENMP
    int threads = config.threads;
    if (const char* env = std::getenv("MZPHOTON_THREADS")) threads = std::atoi(env);
    if (threads > 0) omp_set_num_threads(threads);
#endif

    const std::filesystem::path out_dir(config.output_directory);
    std::filesystem::create_directories(out_dir);

    const ScenarioSetup setup = make_setup(config);
    const std::vector<Member> members = sample_members(setup, config);

    RunReport report;
    report.scenario = config.scenario;
    try {
        switch (config.scenario) {
            case Scenario::InputOnly:
                run_free_propagation(config, setup, members, Region::Input, report, out_dir);
                break;
            case Scenario::RegionI:
                run_free_propagation(config, setup, members, Region::I, report, out_dir);
                break;
            case Scenario::WhichPath:
                run_which_path(config, setup, members, report, out_dir);
                break;
            case Scenario::InterferenceScan:
                run_interference_scan(config, setup, members, report, out_dir);
                break;
        }
    } catch (const std::exception& ex) {
        throw std::runtime_error("scenario '" + scenario_name(config.scenario) +
                                 "' failed: " + ex.what());
    }

    const std::string report_path = (out_dir / "run_report.json").string();
    write_run_report_json(report_path, report);
    report.outputs.push_back(report_path);
    return report;
}

void write_run_report_json(const std::string& path, const RunReport& report) {
    nlohmann::json j;
    j["scenario"] = scenario_name(report.scenario);
    j["all_passed"] = report.all_passed();
    auto& checks = j["checks"] = nlohmann::json::array();
    for (const auto& check : report.checks)
        checks.push_back({{"name", check.name},
                          {"measured", check.measured},
                          {"tolerance", check.tolerance},
                          {"pass", check.pass}});
    // File names only: the report lives beside its outputs and stays
    // byte-identical across output directories.
    auto& outputs = j["outputs"] = nlohmann::json::array();
    for (const auto& output : report.outputs)
        outputs.push_back(std::filesystem::path(output).filename().string());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

}  // namespace mzp
