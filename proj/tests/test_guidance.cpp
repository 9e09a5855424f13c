#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mzp/beables.hpp"
#include "mzp/guidance.hpp"
#include "mzp/sampling.hpp"

using namespace mzp;

namespace {

const PhysicsConstants kNatural;

std::shared_ptr<const ModeSet> lattice() {
    return std::make_shared<const ModeSet>(ModeSet::build(BoxGeometry{kTwoPi, 1}));
}

const BeamModeMap kBeams = standard_beam_mode_map(2);

PhotonState region_ii_state(std::shared_ptr<const ModeSet> modes, double phi) {
    const Complex i{0.0, 1.0};
    const Complex eiphi = std::polar(1.0, phi);
    return PhotonState::superposition(std::move(modes),
                                      {{kBeams.at("c"), -(1.0 + eiphi) / 2.0},
                                       {kBeams.at("d"), i * (1.0 - eiphi) / 2.0}});
}

PhotonState region_i_state(std::shared_ptr<const ModeSet> modes, double phi) {
    const Complex i{0.0, 1.0};
    return PhotonState::superposition(
        std::move(modes), {{kBeams.at("alpha"), i / std::sqrt(2.0)},
                           {kBeams.at("beta"), -std::polar(1.0, phi) / std::sqrt(2.0)}});
}

Complex coordinate_of(const FieldConfiguration& config, const ModeIndex& mode) {
    return config.coordinate(*config.modes().find(mode));
}

}  // namespace

TEST_CASE("guidance velocity: single mode at q = 1 moves at i/2") {
    const auto modes = lattice();
    const PhotonState state = PhotonState::single(modes, kBeams.at("in"));
    FieldConfiguration config(modes);
    config.set_coordinate(*modes->find(kBeams.at("in")), Complex{1.0, 0.0});
    const auto rhs = guidance_rhs(state, config, kNatural);
    REQUIRE(rhs.size() == 1);
    CHECK(std::abs(rhs[0] - Complex{0.0, 0.5}) < 1e-15);
}

TEST_CASE("guidance velocity: two arms at alpha=1, beta=i, phi=0 give d(alpha*)/dt = i/4") {
    const auto modes = lattice();
    const PhotonState state = region_i_state(modes, 0.0);
    FieldConfiguration config(modes);
    config.set_coordinate(*modes->find(kBeams.at("alpha")), Complex{1.0, 0.0});
    config.set_coordinate(*modes->find(kBeams.at("beta")), Complex{0.0, 1.0});
    const auto rhs = guidance_rhs(state, config, kNatural);
    REQUIRE(rhs.size() == 2);
    CHECK(std::abs(rhs[0] - Complex{0.0, 0.25}) < 1e-15);  // entry order: (0,1,0) first
}

TEST_CASE("guidance velocity: two-output closed form") {
    const auto modes = lattice();
    Rng rng(111);
    for (int trial = 0; trial < 20; ++trial) {
        const double phi = kTwoPi * rng.uniform();
        const PhotonState state = region_ii_state(modes, phi);
        FieldConfiguration config = sample_ground_configuration(modes, kNatural, 300 + trial);
        const Complex c = coordinate_of(config, kBeams.at("c"));
        const Complex d = coordinate_of(config, kBeams.at("d"));
        const auto rhs = guidance_rhs(state, config, kNatural);

        // dc*/dt = (hbar c^2/2)(1+e^{-i phi}) / [-i(1+e^{-i phi}) c + (1-e^{-i phi}) d],
        // dd*/dt = (hbar c^2/2) i (1-e^{-i phi}) / [same denominator].
        const Complex denominator = -Complex{0.0, 1.0} * (1.0 + std::polar(1.0, -phi)) * c +
                                    (1.0 - std::polar(1.0, -phi)) * d;
        const Complex expected_c = 0.5 * (1.0 + std::polar(1.0, -phi)) / denominator;
        const Complex expected_d =
            0.5 * Complex{0.0, 1.0} * (1.0 - std::polar(1.0, -phi)) / denominator;
        // excited() order: d mode (0,1,0) first, c mode (1,0,0) second.
        CHECK(std::abs(rhs[1] - expected_c) < 1e-13 * std::abs(expected_c));
        CHECK(std::abs(rhs[0] - expected_d) < 1e-13 * std::abs(expected_d));
    }
}

TEST_CASE("analytic solution: t = 0 returns the stored constants") {
    const auto modes = lattice();
    const FieldConfiguration background = sample_ground_configuration(modes, kNatural, 2);
    const MatchedConstants constants = match_constants(1.3, 0.7, 0.9, kNatural, kBeams);
    const FieldConfiguration at_zero = analytic_solution(constants.region_i, background, 0.0);
    for (const auto& beam : constants.region_i.beams) {
        const Complex q_conj = std::conj(coordinate_of(at_zero, beam.mode));
        CHECK(std::abs(q_conj - beam.amplitude * std::polar(1.0, beam.phase)) < 1e-14);
    }
    // Background coordinates pass through untouched.
    const auto bg_entry = *modes->find(ModeIndex{{1, 1, 0}, 1});
    CHECK(at_zero.coordinate(bg_entry) == background.coordinate(bg_entry));
}

TEST_CASE("analytic solution satisfies the guidance equation identically") {
    const auto modes = lattice();
    const FieldConfiguration background = sample_ground_configuration(modes, kNatural, 3);
    const double phi = 1.2;
    for (const Region region : {Region::Input, Region::I, Region::II}) {
        const PhotonState state =
            region == Region::Input ? PhotonState::single(modes, kBeams.at("in"))
            : region == Region::I   ? region_i_state(modes, phi)
                                    : region_ii_state(modes, phi);
        const MatchedConstants constants = match_constants(1.1, 0.5, phi, kNatural, kBeams);
        const RegionConstants& rc = constants.at(region);
        const double period = kTwoPi / rc.omega;
        for (const double t : {0.0, 0.31 * period, 0.77 * period}) {
            const FieldConfiguration config = analytic_solution(rc, background, t);
            const auto rhs = guidance_rhs(state, config, kNatural);
            for (std::size_t j = 0; j < state.excited().size(); ++j) {
                const Complex q_conj =
                    std::conj(config.coordinate(state.excited()[j].entry));
                // d q*/dt = i omega q* along the rotation.
                CHECK(std::abs(rhs[j] - Complex{0.0, rc.omega} * q_conj) < 1e-12);
            }
        }
    }
}

TEST_CASE("integration tracks the analytic solution over ten periods") {
    const auto modes = lattice();
    const double phi = 0.8;
    for (const Region region : {Region::Input, Region::I, Region::II}) {
        const PhotonState state =
            region == Region::Input ? PhotonState::single(modes, kBeams.at("in"))
            : region == Region::I   ? region_i_state(modes, phi)
                                    : region_ii_state(modes, phi);
        double worst = 0.0;
        double worst_amplitude_drift = 0.0;
        for (int member = 0; member < 10; ++member) {
            const FieldConfiguration background =
                sample_ground_configuration(modes, kNatural, derive_seed(50, member));
            const auto photon =
                sample_photon_mode(1.0, kNatural, derive_seed(51, member));
            const MatchedConstants constants =
                match_constants(photon.amplitude, photon.phase, phi, kNatural, kBeams);
            const RegionConstants& rc = constants.at(region);
            const double period = kTwoPi / rc.omega;

            IntegratorControls controls;
            controls.max_step = period / 50.0;
            controls.samples = 200;
            const FieldConfiguration config0 = analytic_solution(rc, background, 0.0);
            const Trajectory trajectory =
                integrate(state, config0, 10.0 * period, controls, kNatural);
            CHECK(trajectory.diagnostics.on_shell_initial);
            CHECK(!trajectory.diagnostics.node_event);

            for (std::size_t s = 0; s < trajectory.sample_count(); ++s) {
                const FieldConfiguration exact =
                    analytic_solution(rc, background, trajectory.times[s]);
                for (std::size_t j = 0; j < state.excited().size(); ++j) {
                    const std::size_t entry = state.excited()[j].entry;
                    const double amp = std::abs(exact.coordinate(entry));
                    if (amp < 1e-14) continue;
                    worst = std::max(worst,
                                     std::abs(trajectory.excited_coords[s][j] -
                                              exact.coordinate(entry)) /
                                         amp);
                    worst_amplitude_drift = std::max(
                        worst_amplitude_drift,
                        std::abs(std::abs(trajectory.excited_coords[s][j]) - amp) / amp);
                }
            }
        }
        CHECK(worst < 1e-8);
        CHECK(worst_amplitude_drift < 1e-8);
    }
}

TEST_CASE("decoupling ratios are constants of motion on shell") {
    const auto modes = lattice();
    const double phi = 1.9;
    const FieldConfiguration background = sample_ground_configuration(modes, kNatural, 77);
    const MatchedConstants constants = match_constants(1.4, 0.2, phi, kNatural, kBeams);

    SUBCASE("two arms: alpha* = i e^{i phi} beta*") {
        const PhotonState state = region_i_state(modes, phi);
        IntegratorControls controls;
        const double period = kTwoPi / constants.region_i.omega;
        controls.max_step = period / 50.0;
        controls.samples = 400;
        const Trajectory trajectory =
            integrate(state, analytic_solution(constants.region_i, background, 0.0),
                      10.0 * period, controls, kNatural);
        const Complex ratio_constant = Complex{0.0, 1.0} * std::polar(1.0, phi);
        for (std::size_t s = 0; s < trajectory.sample_count(); ++s) {
            const FieldConfiguration config = trajectory.configuration_at(s);
            const Complex alpha_conj = std::conj(coordinate_of(config, kBeams.at("alpha")));
            const Complex beta_conj = std::conj(coordinate_of(config, kBeams.at("beta")));
            CHECK(std::abs(alpha_conj - ratio_constant * beta_conj) /
                      std::abs(alpha_conj) <
                  1e-8);
        }
        CHECK(trajectory.diagnostics.ratio_drift.back() < 1e-8);
    }

    SUBCASE("two outputs: i(1 - e^{-i phi}) c* = (1 + e^{-i phi}) d*") {
        const PhotonState state = region_ii_state(modes, phi);
        IntegratorControls controls;
        const double period = kTwoPi / constants.region_ii.omega;
        controls.max_step = period / 50.0;
        controls.samples = 400;
        const Trajectory trajectory =
            integrate(state, analytic_solution(constants.region_ii, background, 0.0),
                      10.0 * period, controls, kNatural);
        const Complex lhs_factor = Complex{0.0, 1.0} * (1.0 - std::polar(1.0, -phi));
        const Complex rhs_factor = 1.0 + std::polar(1.0, -phi);
        for (std::size_t s = 0; s < trajectory.sample_count(); s += 20) {
            const FieldConfiguration config = trajectory.configuration_at(s);
            const Complex c_conj = std::conj(coordinate_of(config, kBeams.at("c")));
            const Complex d_conj = std::conj(coordinate_of(config, kBeams.at("d")));
            CHECK(std::abs(lhs_factor * c_conj - rhs_factor * d_conj) /
                      std::abs(lhs_factor * c_conj) <
                  1e-8);
        }
    }
}

TEST_CASE("off-shell initial data integrates and is flagged") {
    const auto modes = lattice();
    const double phi = 0.6;
    const PhotonState state = region_i_state(modes, phi);
    FieldConfiguration config0 = sample_ground_configuration(modes, kNatural, 5);
    // Arbitrary arm values violating the decoupling relation.
    config0.set_coordinate(*modes->find(kBeams.at("alpha")), Complex{1.0, 0.2});
    config0.set_coordinate(*modes->find(kBeams.at("beta")), Complex{-0.3, 0.9});

    IntegratorControls controls;
    controls.max_step = 0.5;
    controls.samples = 100;
    const Trajectory trajectory = integrate(state, config0, 20.0, controls, kNatural);
    CHECK(!trajectory.diagnostics.on_shell_initial);
    CHECK(!trajectory.diagnostics.node_event);
    CHECK(trajectory.sample_count() == 101);

    // The overlap modulus and the quantum potential stay conserved even off shell.
    for (std::size_t s = 0; s < trajectory.sample_count(); ++s) {
        CHECK(std::abs(trajectory.diagnostics.node_distance[s] -
                       trajectory.diagnostics.node_distance[0]) < 1e-9);
        CHECK(std::abs(trajectory.diagnostics.quantum_potential[s] -
                       trajectory.diagnostics.quantum_potential[0]) < 1e-9);
    }
}

TEST_CASE("nonlocal arm coupling: perturbing one arm changes the other arm's velocity") {
    const auto modes = lattice();
    const double phi = 0.5;
    const PhotonState state = region_i_state(modes, phi);
    const FieldConfiguration background = sample_ground_configuration(modes, kNatural, 31);
    const MatchedConstants constants = match_constants(1.0, 0.0, phi, kNatural, kBeams);
    const FieldConfiguration config0 = analytic_solution(constants.region_i, background, 0.0);

    const auto baseline = guidance_rhs(state, config0, kNatural);
    FieldConfiguration perturbed = config0;
    const auto beta_entry = *modes->find(kBeams.at("beta"));
    perturbed.set_coordinate(beta_entry, perturbed.coordinate(beta_entry) + Complex{0.05, 0.0});
    const auto shifted = guidance_rhs(state, perturbed, kNatural);
    CHECK(std::abs(shifted[0] - baseline[0]) > 1e-6);  // alpha responds to beta
}

TEST_CASE("starting at a node is an error; energy is conserved along flows") {
    const auto modes = lattice();
    const PhotonState state = region_i_state(modes, 0.3);
    FieldConfiguration config0(modes);  // all zero: node
    IntegratorControls controls;
    controls.max_step = 0.1;
    CHECK_THROWS_AS(integrate(state, config0, 1.0, controls, kNatural), NodeError);

    const FieldConfiguration background = sample_ground_configuration(modes, kNatural, 6);
    const MatchedConstants constants = match_constants(0.9, 0.1, 0.3, kNatural, kBeams);
    const double period = kTwoPi / constants.region_i.omega;
    controls.max_step = period / 50.0;
    controls.samples = 128;
    const Trajectory trajectory =
        integrate(state, analytic_solution(constants.region_i, background, 0.0), 5.0 * period,
                  controls, kNatural);
    for (std::size_t s = 0; s < trajectory.sample_count(); ++s) {
        CHECK(trajectory.diagnostics.energy[s] == trajectory.diagnostics.energy[0]);
        CHECK(std::abs(trajectory.diagnostics.quantum_potential[s] -
                       trajectory.diagnostics.quantum_potential[0]) < 1e-10);
    }
}

TEST_CASE("second-order form equals the printed two-arm right-hand side") {
    const auto modes = lattice();
    Rng rng(888);
    for (int trial = 0; trial < 25; ++trial) {
        const double phi = kTwoPi * rng.uniform();
        const PhotonState state = region_i_state(modes, phi);
        FieldConfiguration config = sample_ground_configuration(modes, kNatural, 900 + trial);
        const Complex alpha = coordinate_of(config, kBeams.at("alpha"));
        const Complex beta = coordinate_of(config, kBeams.at("beta"));

        const auto unified = second_derivative_conjugate(state, config, kNatural);
        // h = -i alpha - beta e^{-i phi}; (1/c^2) d2 alpha*/dt2
        //   = -hbar^2 c^2 (alpha* + i beta* e^{i phi}) / (2 (h* h)^2).
        const Complex h = -Complex{0.0, 1.0} * alpha - beta * std::polar(1.0, -phi);
        const double h2 = std::norm(h);
        const Complex printed_alpha =
            -(std::conj(alpha) + Complex{0.0, 1.0} * std::conj(beta) * std::polar(1.0, phi)) /
            (2.0 * h2 * h2);
        CHECK(std::abs(unified[0] - printed_alpha) < 1e-12 * std::abs(printed_alpha));
    }
}

TEST_CASE("second-order form equals the potential-derived two-output right-hand side") {
    const auto modes = lattice();
    Rng rng(889);
    for (int trial = 0; trial < 25; ++trial) {
        const double phi = 0.2 + 2.7 * rng.uniform();
        const PhotonState state = region_ii_state(modes, phi);
        FieldConfiguration config = sample_ground_configuration(modes, kNatural, 950 + trial);
        const Complex c = coordinate_of(config, kBeams.at("c"));
        const Complex d = coordinate_of(config, kBeams.at("d"));

        const auto unified = second_derivative_conjugate(state, config, kNatural);
        const Complex h = -(1.0 + std::polar(1.0, -phi)) * c -
                          Complex{0.0, 1.0} * (1.0 - std::polar(1.0, -phi)) * d;
        const double h2 = std::norm(h);
        const Complex rhs_c =
            -2.0 * ((1.0 + std::cos(phi)) * std::conj(c) - std::sin(phi) * std::conj(d)) /
            (h2 * h2);
        const Complex rhs_d =
            -2.0 * ((1.0 - std::cos(phi)) * std::conj(d) - std::sin(phi) * std::conj(c)) /
            (h2 * h2);
        // excited() is sorted by lattice order: the d mode (0,1,0) precedes the c mode (1,0,0).
        CHECK(std::abs(unified[1] - rhs_c) < 1e-12 * std::abs(rhs_c));
        CHECK(std::abs(unified[0] - rhs_d) < 1e-12 * std::abs(rhs_d));
    }
}

TEST_CASE("wave-equation residual vanishes on analytic trajectories") {
    const auto modes = lattice();
    const double phi = 0.7;
    const FieldConfiguration background = sample_ground_configuration(modes, kNatural, 12);
    const MatchedConstants constants = match_constants(1.2, 0.9, phi, kNatural, kBeams);

    for (const Region region : {Region::I, Region::II}) {
        const PhotonState state =
            region == Region::I ? region_i_state(modes, phi) : region_ii_state(modes, phi);
        const RegionConstants& rc = constants.at(region);
        const double period = kTwoPi / rc.omega;
        const Trajectory exact =
            analytic_trajectory(state, rc, background, period, 1000, kNatural);
        const WaveEquationResidual residual = wave_equation_residual(state, exact, kNatural);
        CHECK(residual.max_residual < 1e-8);
    }
}

TEST_CASE("wave-equation residual needs enough samples and a live photon sector") {
    const auto modes = lattice();
    const double phi = 0.7;
    const PhotonState state = region_i_state(modes, phi);
    const FieldConfiguration background = sample_ground_configuration(modes, kNatural, 13);
    const MatchedConstants constants = match_constants(1.0, 0.0, phi, kNatural, kBeams);
    const Trajectory tiny = analytic_trajectory(state, constants.region_i, background, 1.0, 3,
                                                kNatural);
    CHECK_THROWS_AS(wave_equation_residual(state, tiny, kNatural), std::invalid_argument);

    // Excited modes at zero amplitude: the closed form is at a node.
    Trajectory zeroed = analytic_trajectory(state, constants.region_i, background, 1.0, 8,
                                            kNatural);
    for (auto& sample : zeroed.excited_coords)
        for (auto& q : sample) q = Complex{0.0, 0.0};
    CHECK_THROWS_AS(wave_equation_residual(state, zeroed, kNatural), NodeError);
}

TEST_CASE("ensemble integration: parallel path reproduces the serial reference exactly") {
    const auto modes = lattice();
    const double phi = 1.0;
    const PhotonState state = region_ii_state(modes, phi);
    std::vector<EnsembleMember> members;
    for (int m = 0; m < 12; ++m) {
        const FieldConfiguration background =
            sample_ground_configuration(modes, kNatural, derive_seed(600, m));
        const auto photon = sample_photon_mode(1.0, kNatural, derive_seed(601, m));
        const MatchedConstants constants =
            match_constants(photon.amplitude, photon.phase, phi, kNatural, kBeams);
        members.push_back(
            EnsembleMember{state, analytic_solution(constants.region_ii, background, 0.0)});
    }
    IntegratorControls controls;
    controls.max_step = 0.2;
    controls.samples = 64;
    const auto serial = integrate_ensemble_serial(members, 10.0, controls, kNatural);
    const auto parallel = integrate_ensemble(members, 10.0, controls, kNatural);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t m = 0; m < serial.size(); ++m) {
        REQUIRE(serial[m].sample_count() == parallel[m].sample_count());
        for (std::size_t s = 0; s < serial[m].sample_count(); ++s) {
            CHECK(serial[m].times[s] == parallel[m].times[s]);
            for (std::size_t j = 0; j < serial[m].excited_coords[s].size(); ++j)
                CHECK(serial[m].excited_coords[s][j] == parallel[m].excited_coords[s][j]);
        }
    }
}

TEST_CASE("extinguished output stays frozen at zero") {
    const auto modes = lattice();
    const PhotonState state = region_ii_state(modes, 0.0);  // d-beam off
    const FieldConfiguration background = sample_ground_configuration(modes, kNatural, 91);
    const MatchedConstants constants = match_constants(1.0, 0.3, 0.0, kNatural, kBeams);
    IntegratorControls controls;
    const double period = kTwoPi / constants.region_ii.omega;
    controls.max_step = period / 50.0;
    controls.samples = 60;
    const Trajectory trajectory =
        integrate(state, analytic_solution(constants.region_ii, background, 0.0), 3.0 * period,
                  controls, kNatural);
    const auto& excited = state.excited();
    for (std::size_t j = 0; j < excited.size(); ++j) {
        if (std::abs(excited[j].coeff) > 1e-12) continue;
        for (std::size_t s = 0; s < trajectory.sample_count(); ++s)
            CHECK(std::abs(trajectory.excited_coords[s][j]) < 1e-14);
    }
}
