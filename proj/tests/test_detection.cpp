#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "mzp/detection.hpp"
#include "mzp/optics.hpp"
#include "mzp/wavefunctional.hpp"

using namespace mzp;

namespace {

const PhysicsConstants kNatural;
const BeamModeMap kBeams = standard_beam_mode_map(2);

std::shared_ptr<const ModeSet> lattice() {
    return std::make_shared<const ModeSet>(ModeSet::build(BoxGeometry{kTwoPi, 1}));
}

PhotonState arm_state(std::shared_ptr<const ModeSet> modes, double phi) {
    const Complex i{0.0, 1.0};
    return PhotonState::superposition(
        std::move(modes), {{kBeams.at("alpha"), i / std::sqrt(2.0)},
                           {kBeams.at("beta"), -std::polar(1.0, phi) / std::sqrt(2.0)}});
}

// Occupation-number route through the annihilation sum: apply a_{k mu} to each
// excited ket and collect the vacuum component.
Complex ladder_route_field_factor(const PhotonState& state) {
    std::map<std::size_t, Complex> kets;  // occupied entry -> coefficient
    for (const auto& e : state.excited()) kets[e.entry] = e.coeff;
    Complex vacuum_component{0.0, 0.0};
    for (const auto& [entry, coeff] : kets) {
        // a_j |1_j> = |0>, weighted by 1/sqrt(k_j)
        vacuum_component += coeff / std::sqrt(state.modes().entry(entry).kappa);
    }
    return vacuum_component;
}

// Simpson quadrature of the electron-sector integral in spherical coordinates,
// with the angular part reduced analytically:
//   int u e^{-i s u} du over [-1, 1] = 2i (s cos s - sin s) / s^2.
double quadrature_dipole_factor(const DetectorAtom& atom, const ElectronChannel& channel,
                                const Vec3& polarization, double volume) {
    const double a = atom.bohr_radius;
    const double k = norm(channel.wave_vector);
    const double r_max = 50.0 * a;
    const std::size_t n = 100000;  // even
    const double h = r_max / static_cast<double>(n);

    auto integrand = [&](double r) {
        const double s = k * r;
        const double angular = s < 1e-8 ? -s / 3.0 + s * s * s / 30.0
                                        : (s * std::cos(s) - std::sin(s)) / (s * s);
        return r * r * std::exp(-r / a) * angular;
    };
    double sum = integrand(0.0) + integrand(r_max);
    for (std::size_t i = 1; i < n; ++i)
        sum += integrand(h * static_cast<double>(i)) * (i % 2 == 0 ? 2.0 : 4.0);
    const double radial = sum * h / 3.0;

    // (-i hbar)(-1/a) * 2 pi * radial * 2i = -(4 pi hbar / a) * radial, directed along k.
    const double magnitude = -4.0 * kPi * kNatural.hbar / a * radial;
    const double projection = dot(polarization, channel.wave_vector) / k;
    return projection * magnitude / std::sqrt(volume * kPi * a * a * a);
}

}  // namespace

TEST_CASE("field factor: (i - e^{i phi})/sqrt(2 kappa0) onto the vacuum") {
    const auto modes = lattice();

    SUBCASE("phi = 0") {
        const PhotonState state = arm_state(modes, 0.0);
        const Complex factor = field_matrix_factor(state);
        CHECK(std::abs(factor - (Complex{0.0, 1.0} - 1.0) / std::sqrt(2.0)) < 1e-15);
        CHECK(std::norm(factor) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(which_path_modulus_squared(state) == doctest::Approx(2.0).epsilon(1e-14));
    }

    SUBCASE("phi = pi/2 extinguishes the detector amplitude") {
        const PhotonState state = arm_state(modes, kPi / 2.0);
        CHECK(std::abs(field_matrix_factor(state)) < 1e-15);
    }

    SUBCASE("|i - e^{i phi}|^2 = 2 (1 - sin phi) across phi") {
        for (int step = 0; step <= 40; ++step) {
            const double phi = kTwoPi * static_cast<double>(step) / 40.0;
            const PhotonState state = arm_state(modes, phi);
            CHECK(std::abs(which_path_modulus_squared(state) - 2.0 * (1.0 - std::sin(phi))) <
                  1e-12);
        }
    }

    SUBCASE("any excited final mode gives exactly zero") {
        const PhotonState state = arm_state(modes, 0.3);
        const PhotonState excited_final = PhotonState::single(modes, kBeams.at("alpha"));
        CHECK(field_matrix_factor(state, excited_final) == Complex{0.0, 0.0});
        CHECK(field_matrix_factor(PhotonState::vacuum(modes)) == Complex{0.0, 0.0});
    }

    SUBCASE("ladder-operator route agrees") {
        for (const double phi : {0.0, 0.7, 1.9, 3.0}) {
            const PhotonState state = arm_state(modes, phi);
            CHECK(std::abs(field_matrix_factor(state) - ladder_route_field_factor(state)) <
                  1e-15);
        }
    }
}

TEST_CASE("dipole factor closed form") {
    DetectorAtom atom;
    atom.reduced_mass = 1.0;
    atom.charge = 1.0;
    atom.bohr_radius = 1.0;
    atom.ionization_energy = 0.5;

    SUBCASE("a = V = hbar = 1, k_en parallel to the polarization, unit magnitude") {
        const ElectronChannel channel = make_channel(atom, Vec3{0.0, 0.0, 1.0}, kNatural);
        const double factor =
            dipole_matrix_factor(atom, channel, Vec3{0.0, 0.0, 1.0}, 1.0, kNatural);
        CHECK(factor == doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-14));
    }

    SUBCASE("transverse electron momentum gives zero") {
        const ElectronChannel channel = make_channel(atom, Vec3{1.0, 0.0, 0.0}, kNatural);
        CHECK(dipole_matrix_factor(atom, channel, Vec3{0.0, 0.0, 1.0}, 1.0, kNatural) == 0.0);
    }

    SUBCASE("k^-3 falloff at large momentum") {
        const Vec3 eps{0.0, 0.0, 1.0};
        const double k = 40.0;
        const double f1 = dipole_matrix_factor(atom, make_channel(atom, eps * k, kNatural), eps,
                                               1.0, kNatural);
        const double f2 = dipole_matrix_factor(atom, make_channel(atom, eps * (2.0 * k), kNatural),
                                               eps, 1.0, kNatural);
        CHECK(f1 / f2 == doctest::Approx(8.0).epsilon(0.01));
    }

    SUBCASE("matches the spherical quadrature to 1e-10") {
        atom = DetectorAtom::hydrogenic(1.0, 1.0, kNatural);
        const double volume = std::pow(kTwoPi, 3);
        const Vec3 eps{0.0, 0.0, -1.0};
        for (const double k : {0.02, 0.11, 0.35}) {
            const ElectronChannel channel = make_channel(atom, eps * k, kNatural);
            const double closed = dipole_matrix_factor(atom, channel, eps, volume, kNatural);
            const double numeric = quadrature_dipole_factor(atom, channel, eps, volume);
            CHECK(std::abs(closed - numeric) < 1e-10 * std::max(1.0, std::abs(closed)));
        }
    }
}

TEST_CASE("hydrogenic defaults: Bohr radius and ionization energy") {
    const DetectorAtom atom = DetectorAtom::hydrogenic(2.0, 1.5, kNatural);
    CHECK(atom.bohr_radius == doctest::Approx(4.0 * kPi / (2.0 * 1.5 * 1.5)).epsilon(1e-14));
    CHECK(atom.ionization_energy ==
          doctest::Approx(1.0 / (2.0 * 2.0 * atom.bohr_radius * atom.bohr_radius))
              .epsilon(1e-14));
    CHECK_THROWS_AS(DetectorAtom::hydrogenic(-1.0, 1.0, kNatural), std::invalid_argument);
}

TEST_CASE("energy bookkeeping: zero-point energy cancels in the defect") {
    const auto modes = lattice();
    const PhotonState state = arm_state(modes, 0.4);
    const DetectorAtom atom = DetectorAtom::hydrogenic(1.0, 1.0, kNatural);
    const ElectronChannel channel = make_channel(atom, Vec3{0.0, 0.0, 0.9}, kNatural);

    const double defect = energy_defect(atom, channel, state, kNatural);
    // Total final (vacuum + electron) minus total initial (photon + bound atom):
    // the zero-point sum appears on both sides.
    const double from_totals =
        (total_energy(PhotonState::vacuum(modes), kNatural) + channel.kinetic_energy) -
        (total_energy(state, kNatural) - atom.ionization_energy);
    CHECK(defect == doctest::Approx(from_totals).epsilon(1e-14));

    const ElectronChannel shell = on_shell_channel(atom, Vec3{0.0, 0.0, 1.0}, 1.0, kNatural);
    CHECK(energy_defect(atom, shell, state, kNatural) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(shell.kinetic_energy ==
          doctest::Approx(1.0 - atom.ionization_energy).epsilon(1e-14));
}

TEST_CASE("time integral factor: sinc structure and the on-shell limit") {
    const double t = 50.0;
    CHECK(std::abs(time_integral_factor(0.0, t, kNatural) - Complex{0.0, -t}) < 1e-15);
    // Continuity at tiny energies.
    CHECK(std::abs(time_integral_factor(1e-13, t, kNatural) - Complex{0.0, -t}) < 1e-9);
    // |TI|^2 = 4 sin^2(E t / 2) / E^2.
    for (const double energy : {0.01, 0.3, 1.7}) {
        const double expected =
            4.0 * std::pow(std::sin(0.5 * energy * t), 2) / (energy * energy);
        CHECK(std::norm(time_integral_factor(energy, t, kNatural)) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("transition amplitude: quadratic short-time growth on shell") {
    const auto modes = lattice();
    const PhotonState state = arm_state(modes, 0.0);
    const DetectorAtom atom = DetectorAtom::hydrogenic(1.0, 1.0, kNatural);
    const Vec3 eps = modes->entry(*modes->find(kBeams.at("in"))).polarization;
    const ElectronChannel shell = on_shell_channel(atom, eps, 1.0, kNatural);

    const double t1 = 0.05;
    const double p1 = std::norm(transition_amplitude(atom, shell, state, eps, t1, kNatural));
    const double p2 =
        std::norm(transition_amplitude(atom, shell, state, eps, 2.0 * t1, kNatural));
    CHECK(p2 / p1 == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("factorization: matrix element equals prefactor x field factor x dipole factor") {
    const auto modes = lattice();
    const PhotonState state = arm_state(modes, 1.1);
    const DetectorAtom atom = DetectorAtom::hydrogenic(1.0, 1.0, kNatural);
    const Vec3 eps = modes->entry(*modes->find(kBeams.at("in"))).polarization;
    const ElectronChannel channel = make_channel(atom, eps * 1.2, kNatural);
    const double volume = modes->geometry().volume();

    const Complex h = interaction_matrix_element(atom, channel, state, eps, kNatural);
    const Complex product = matrix_element_prefactor(atom, volume, kNatural) *
                            field_matrix_factor(state) *
                            dipole_matrix_factor(atom, channel, eps, volume, kNatural);
    CHECK(std::abs(h - product) == 0.0);

    // Against the independently assembled value (ladder route + quadrature dipole).
    const Complex direct = matrix_element_prefactor(atom, volume, kNatural) *
                           ladder_route_field_factor(state) *
                           quadrature_dipole_factor(atom, channel, eps, volume);
    CHECK(std::abs(h - direct) < 1e-10 * std::abs(h));
}

TEST_CASE("absorption probability: golden-rule window behavior") {
    const auto modes = lattice();
    const PhotonState state = arm_state(modes, 0.0);
    const DetectorAtom atom = DetectorAtom::hydrogenic(1.0, 1.0, kNatural);
    const Vec3 eps = modes->entry(*modes->find(kBeams.at("in"))).polarization;

    const double on_shell = 1.0 - atom.ionization_energy;
    const double t = 1000.0 * kPi / on_shell;
    const double lobe = kTwoPi / t;
    const double window = 60.0 * lobe;
    const std::size_t n = 4097;
    const auto channels =
        energy_scan_channels(atom, eps, on_shell - window, on_shell + window, n, kNatural);
    const double de = 2.0 * window / static_cast<double>(n - 1);
    std::vector<double> weights(n, de);
    weights.front() = weights.back() = 0.5 * de;

    const DetectionResult result =
        absorption_probability(atom, channels, weights, state, eps, t, kNatural);
    const DetectionResult doubled =
        absorption_probability(atom, channels, weights, state, eps, 2.0 * t, kNatural);

    SUBCASE("probability doubles with the interaction time") {
        CHECK(doubled.total_probability / result.total_probability ==
              doctest::Approx(2.0).epsilon(0.02));
    }

    SUBCASE("probability is proportional to 2(1 - sin phi)") {
        const PhotonState rotated = arm_state(modes, 2.0);
        const DetectionResult result_rotated =
            absorption_probability(atom, channels, weights, rotated, eps, t, kNatural);
        const double expected_ratio =
            (1.0 - std::sin(2.0)) / (1.0 - std::sin(0.0));
        CHECK(result_rotated.total_probability / result.total_probability ==
              doctest::Approx(expected_ratio).epsilon(1e-10));

        // At phi = pi/2 the field factor cancels (to rounding in e^{i pi/2}).
        const PhotonState dark = arm_state(modes, kPi / 2.0);
        const DetectionResult nothing =
            absorption_probability(atom, channels, weights, dark, eps, t, kNatural);
        CHECK(nothing.total_probability < 1e-30 * result.total_probability);
    }

    SUBCASE("main sinc lobe has half-width 2 pi hbar / t") {
        const std::size_t mid = n / 2;
        std::size_t zero_index = mid;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = mid; i < n; ++i) {
            const double energy = channels[i].kinetic_energy - on_shell;
            if (energy < 0.5 * lobe || energy > 1.5 * lobe) continue;
            if (result.probability_density[i] < best) {
                best = result.probability_density[i];
                zero_index = i;
            }
        }
        const double measured = channels[zero_index].kinetic_energy - on_shell;
        CHECK(measured == doctest::Approx(lobe).epsilon(0.02));
    }

    SUBCASE("parallel channel map equals the serial reference exactly") {
        const DetectionResult serial =
            absorption_probability_serial(atom, channels, weights, state, eps, t, kNatural);
        CHECK(serial.total_probability == result.total_probability);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(serial.amplitudes[i] == result.amplitudes[i]);
    }
}

TEST_CASE("angular distribution follows cos^2 of the polarization angle") {
    const auto modes = lattice();
    const PhotonState state = arm_state(modes, 0.0);
    const DetectorAtom atom = DetectorAtom::hydrogenic(1.0, 1.0, kNatural);
    const Vec3 eps = modes->entry(*modes->find(kBeams.at("in"))).polarization;
    const Vec3 axis = modes->entry(*modes->find(kBeams.at("in"))).k;

    const auto channels = angular_scan_channels(atom, eps, axis, 1.0, 48, kNatural);
    const std::vector<double> weights(channels.size(), 1.0);
    const DetectionResult result =
        absorption_probability(atom, channels, weights, state, eps, 200.0, kNatural);
    const double peak = result.probability_density[0];  // angle 0: along polarization
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const double angle = kTwoPi * static_cast<double>(i) / 48.0;
        CHECK(result.probability_density[i] / peak ==
              doctest::Approx(std::cos(angle) * std::cos(angle)).epsilon(1e-9));
    }
}

TEST_CASE("post-absorption record: whole quantum gone, field in the vacuum") {
    const auto modes = lattice();
    const PhotonState state = arm_state(modes, 0.6);
    const DetectorAtom atom = DetectorAtom::hydrogenic(1.0, 1.0, kNatural);
    const ElectronChannel shell =
        on_shell_channel(atom, Vec3{0.0, 0.0, 1.0}, 1.0, kNatural);

    const PostAbsorptionState post = post_absorption_state(state, shell);
    CHECK(post.field.is_vacuum());
    CHECK(std::abs(state_overlap(PhotonState::vacuum(modes), post.field) - 1.0) == 0.0);
    CHECK(std::abs(state_overlap(state, post.field)) == 0.0);
    CHECK(norm(post.electron.wave_vector - shell.wave_vector) == 0.0);

    // The vacuum drives no photon-mode rotation.
    FieldConfiguration config(modes);
    CHECK(grad_s(post.field, config, kNatural).empty());
}

TEST_CASE("ionization threshold is enforced") {
    DetectorAtom atom = DetectorAtom::hydrogenic(1.0, 1.0, kNatural);
    atom.ionization_energy = 2.0;  // above the quantum energy at kappa0 = 1
    CHECK_THROWS_AS(on_shell_channel(atom, Vec3{0.0, 0.0, 1.0}, 1.0, kNatural),
                    std::invalid_argument);
}
