#include "mzp/detection.hpp"

#include <cmath>
#include <stdexcept>

namespace mzp {

DetectorAtom DetectorAtom::hydrogenic(double reduced_mass, double charge,
                                      const PhysicsConstants& physics,
                                      std::string position_label) {
    if (reduced_mass <= 0.0 || charge == 0.0)
        throw std::invalid_argument("atom needs positive mass and nonzero charge");
    DetectorAtom atom;
    atom.reduced_mass = reduced_mass;
    atom.charge = charge;
    atom.bohr_radius =
        4.0 * kPi * physics.hbar * physics.hbar / (reduced_mass * charge * charge);
    atom.ionization_energy =
        physics.hbar * physics.hbar / (2.0 * reduced_mass * atom.bohr_radius * atom.bohr_radius);
    atom.position_label = std::move(position_label);
    return atom;
}

ElectronChannel make_channel(const DetectorAtom& atom, const Vec3& wave_vector,
                             const PhysicsConstants& physics) {
    ElectronChannel channel;
    channel.wave_vector = wave_vector;
    channel.kinetic_energy =
        physics.hbar * physics.hbar * dot(wave_vector, wave_vector) / (2.0 * atom.reduced_mass);
    return channel;
}

ElectronChannel on_shell_channel(const DetectorAtom& atom, const Vec3& direction, double kappa0,
                                 const PhysicsConstants& physics) {
    const double energy = physics.hbar * physics.c * kappa0 - atom.ionization_energy;
    if (energy <= 0.0)
        throw std::invalid_argument("quantum energy below the ionization threshold");
    const double k = std::sqrt(2.0 * atom.reduced_mass * energy) / physics.hbar;
    return make_channel(atom, normalized(direction) * k, physics);
}

double energy_defect(const DetectorAtom& atom, const ElectronChannel& channel,
                     const PhotonState& state, const PhysicsConstants& physics) {
    return channel.kinetic_energy + atom.ionization_energy -
           physics.hbar * physics.c * state.kappa0();
}

Complex field_matrix_factor(const PhotonState& state) {
    if (state.is_vacuum()) return Complex{0.0, 0.0};
    Complex sum{0.0, 0.0};
    for (const auto& e : state.excited())
        sum += e.coeff / std::sqrt(state.modes().entry(e.entry).kappa);
    return sum;
}

Complex field_matrix_factor(const PhotonState& state, const PhotonState& final_state) {
    // a_{k mu} lowers the one-photon sector onto the vacuum only.
    if (!final_state.is_vacuum()) return Complex{0.0, 0.0};
    return field_matrix_factor(state);
}

double which_path_modulus_squared(const PhotonState& state) {
    return 2.0 * state.kappa0() * std::norm(field_matrix_factor(state));
}

double dipole_matrix_factor(const DetectorAtom& atom, const ElectronChannel& channel,
                            const Vec3& polarization, double volume,
                            const PhysicsConstants& physics) {
    const double a = atom.bohr_radius;
    const double a3 = a * a * a;
    const double k2 = dot(channel.wave_vector, channel.wave_vector);
    const double lorentzian = 1.0 + a * a * k2;
    return physics.hbar / std::sqrt(volume * kPi * a3) * dot(polarization, channel.wave_vector) *
           8.0 * kPi * a3 / (lorentzian * lorentzian);
}

double matrix_element_prefactor(const DetectorAtom& atom, double volume,
                                const PhysicsConstants& physics) {
    return -(atom.charge / (atom.reduced_mass * physics.c)) *
           std::sqrt(physics.hbar * physics.c / (2.0 * volume));
}

Complex interaction_matrix_element(const DetectorAtom& atom, const ElectronChannel& channel,
                                   const PhotonState& state, const Vec3& polarization,
                                   const PhysicsConstants& physics) {
    const double volume = state.modes().geometry().volume();
    return matrix_element_prefactor(atom, volume, physics) * field_matrix_factor(state) *
           dipole_matrix_factor(atom, channel, polarization, volume, physics);
}

Complex time_integral_factor(double energy, double t, const PhysicsConstants& physics) {
    if (energy == 0.0) return Complex{0.0, -t / physics.hbar};
    // 1 - e^{ix} = -2i sin(x/2) e^{ix/2}, stable for small energies
    const double half = 0.5 * energy * t / physics.hbar;
    return Complex{0.0, -2.0} * std::sin(half) * std::polar(1.0, half) / energy;
}

Complex transition_amplitude(const DetectorAtom& atom, const ElectronChannel& channel,
                             const PhotonState& state, const Vec3& polarization, double t,
                             const PhysicsConstants& physics) {
    const Complex h = interaction_matrix_element(atom, channel, state, polarization, physics);
    return h * time_integral_factor(energy_defect(atom, channel, state, physics), t, physics);
}

DetectionResult absorption_probability_serial(const DetectorAtom& atom,
                                              const std::vector<ElectronChannel>& channels,
                                              const std::vector<double>& weights,
                                              const PhotonState& state, const Vec3& polarization,
                                              double t, const PhysicsConstants& physics) {
    if (channels.size() != weights.size())
        throw std::invalid_argument("one integration weight per channel required");
    DetectionResult result;
    result.amplitudes.resize(channels.size());
    result.probability_density.resize(channels.size());
    for (std::size_t i = 0; i < channels.size(); ++i) {
        result.amplitudes[i] =
            transition_amplitude(atom, channels[i], state, polarization, t, physics);
        result.probability_density[i] = std::norm(result.amplitudes[i]);
    }
    for (std::size_t i = 0; i < channels.size(); ++i)
        result.total_probability += result.probability_density[i] * weights[i];
    return result;
}

DetectionResult absorption_probability(const DetectorAtom& atom,
                                       const std::vector<ElectronChannel>& channels,
                                       const std::vector<double>& weights,
                                       const PhotonState& state, const Vec3& polarization,
                                       double t, const PhysicsConstants& physics) {
    if (channels.size() != weights.size())
        throw std::invalid_argument("one integration weight per channel required");
    DetectionResult result;
    result.amplitudes.resize(channels.size());
    result.probability_density.resize(channels.size());
    const std::int64_t n = static_cast<std::int64_t>(channels.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        result.amplitudes[i] =
            transition_amplitude(atom, channels[i], state, polarization, t, physics);
        result.probability_density[i] = std::norm(result.amplitudes[i]);
    }
    for (std::size_t i = 0; i < channels.size(); ++i)
        result.total_probability += result.probability_density[i] * weights[i];
    return result;
}

std::vector<ElectronChannel> energy_scan_channels(const DetectorAtom& atom, const Vec3& direction,
                                                  double e_min, double e_max, std::size_t count,
                                                  const PhysicsConstants& physics) {
    if (count < 2) throw std::invalid_argument("energy scan needs at least two channels");
    if (e_min <= 0.0 || e_max <= e_min) throw std::invalid_argument("invalid energy window");
    const Vec3 dir = normalized(direction);
    std::vector<ElectronChannel> channels;
    channels.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double energy =
            e_min + (e_max - e_min) * static_cast<double>(i) / static_cast<double>(count - 1);
        const double k = std::sqrt(2.0 * atom.reduced_mass * energy) / physics.hbar;
        channels.push_back(make_channel(atom, dir * k, physics));
    }
    return channels;
}

std::vector<ElectronChannel> angular_scan_channels(const DetectorAtom& atom,
                                                   const Vec3& polarization, const Vec3& axis,
                                                   double kappa0, std::size_t count,
                                                   const PhysicsConstants& physics) {
    if (count < 2) throw std::invalid_argument("angular scan needs at least two channels");
    const Vec3 e1 = normalized(polarization);
    Vec3 e2 = cross(normalized(axis), e1);
    if (norm(e2) < 1e-12) throw std::invalid_argument("axis must not be parallel to polarization");
    e2 = normalized(e2);
    const ElectronChannel shell = on_shell_channel(atom, e1, kappa0, physics);
    const double k = norm(shell.wave_vector);
    std::vector<ElectronChannel> channels;
    channels.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double angle = kTwoPi * static_cast<double>(i) / static_cast<double>(count);
        const Vec3 dir = e1 * std::cos(angle) + e2 * std::sin(angle);
        channels.push_back(make_channel(atom, dir * k, physics));
    }
    return channels;
}

PostAbsorptionState post_absorption_state(const PhotonState& state,
                                          const ElectronChannel& channel) {
    return PostAbsorptionState{PhotonState::vacuum(state.modes_ptr()), channel};
}

Complex state_overlap(const PhotonState& a, const PhotonState& b) {
    if (a.is_vacuum() && b.is_vacuum()) return Complex{1.0, 0.0};
    if (a.is_vacuum() != b.is_vacuum()) return Complex{0.0, 0.0};
    Complex sum{0.0, 0.0};
    for (const auto& ea : a.excited())
        for (const auto& eb : b.excited())
            if (ea.entry == eb.entry) sum += std::conj(ea.coeff) * eb.coeff;
    return sum;
}

}  // namespace mzp
