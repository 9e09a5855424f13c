#pragma once

#include <string>
#include <vector>

#include "mzp/core.hpp"
#include "mzp/photon_state.hpp"

namespace mzp {

// Hydrogen-like detector atom in its ground state ~ e^{-r/a}. In
// Heaviside-Lorentz units a = 4 pi hbar^2 / (mu e^2); the default ionization
// energy is the hydrogenic hbar^2 / (2 mu a^2).
struct DetectorAtom {
    double reduced_mass = 1.0;
    double charge = 1.0;
    double bohr_radius = 0.0;
    double ionization_energy = 0.0;
    std::string position_label = "C1";

    static DetectorAtom hydrogenic(double reduced_mass, double charge,
                                   const PhysicsConstants& physics,
                                   std::string position_label = "C1");
};

struct ElectronChannel {
    Vec3 wave_vector;
    double kinetic_energy = 0.0;  // hbar^2 |k|^2 / (2 mu)
};

ElectronChannel make_channel(const DetectorAtom& atom, const Vec3& wave_vector,
                             const PhysicsConstants& physics);

// Channel on the energy shell E_en = hbar c kappa0 - E_ei.
ElectronChannel on_shell_channel(const DetectorAtom& atom, const Vec3& direction, double kappa0,
                                 const PhysicsConstants& physics);

// Energy difference driving the perturbative phase: E_en + E_ei - hbar c kappa0
// (final minus initial; the zero-point energy cancels identically).
double energy_defect(const DetectorAtom& atom, const ElectronChannel& channel,
                     const PhotonState& state, const PhysicsConstants& physics);

// Photon-sector part of the interaction matrix element: sum_{k mu} (1/sqrt(k))
// <final| a_{k mu} |state>. Nonzero only onto the vacuum, where it equals
// sum_j c_j / sqrt(kappa0); for the two-arm interferometer state this is
// (i - e^{i phi}) / sqrt(2 kappa0). Absorption is all-or-nothing: any excited
// final mode gives exactly zero.
Complex field_matrix_factor(const PhotonState& state);
Complex field_matrix_factor(const PhotonState& state, const PhotonState& final_state);

// |i - e^{i phi}|^2 = 2 (1 - sin phi) bookkeeping for reports: 2 kappa0 |field factor|^2.
double which_path_modulus_squared(const PhotonState& state);

// Electron-sector integral in the dipole approximation e^{ik.x} = 1:
// (hbar / sqrt(V pi a^3)) (eps0 . k_en) 8 pi a^3 / (1 + a^2 k_en^2)^2.
double dipole_matrix_factor(const DetectorAtom& atom, const ElectronChannel& channel,
                            const Vec3& polarization, double volume,
                            const PhysicsConstants& physics);

// -(e / mu c) sqrt(hbar c / 2V) from the minimal-coupling Hamiltonian.
double matrix_element_prefactor(const DetectorAtom& atom, double volume,
                                const PhysicsConstants& physics);

// Full first-order matrix element H = prefactor * field factor * dipole factor.
Complex interaction_matrix_element(const DetectorAtom& atom, const ElectronChannel& channel,
                                   const PhotonState& state, const Vec3& polarization,
                                   const PhysicsConstants& physics);

// (1 - e^{i E t / hbar}) / E, with the exact -i t / hbar limit at E = 0.
Complex time_integral_factor(double energy, double t, const PhysicsConstants& physics);

// First-order amplitude a1 = H (1 - e^{i dE t/hbar}) / dE.
Complex transition_amplitude(const DetectorAtom& atom, const ElectronChannel& channel,
                             const PhotonState& state, const Vec3& polarization, double t,
                             const PhysicsConstants& physics);

struct DetectionResult {
    std::vector<Complex> amplitudes;
    std::vector<double> probability_density;  // |a1|^2 per channel
    double total_probability = 0.0;           // weighted channel sum
};

// |a1|^2 over a channel grid with integration weights; OpenMP map over
// channels, deterministic serial reduction.
DetectionResult absorption_probability(const DetectorAtom& atom,
                                       const std::vector<ElectronChannel>& channels,
                                       const std::vector<double>& weights,
                                       const PhotonState& state, const Vec3& polarization,
                                       double t, const PhysicsConstants& physics);
DetectionResult absorption_probability_serial(const DetectorAtom& atom,
                                              const std::vector<ElectronChannel>& channels,
                                              const std::vector<double>& weights,
                                              const PhotonState& state, const Vec3& polarization,
                                              double t, const PhysicsConstants& physics);

// Uniform energy grid of channels along a fixed outgoing direction.
std::vector<ElectronChannel> energy_scan_channels(const DetectorAtom& atom, const Vec3& direction,
                                                  double e_min, double e_max, std::size_t count,
                                                  const PhysicsConstants& physics);

// On-shell channels fanned over the angle between k_en and the polarization.
std::vector<ElectronChannel> angular_scan_channels(const DetectorAtom& atom,
                                                   const Vec3& polarization, const Vec3& axis,
                                                   double kappa0, std::size_t count,
                                                   const PhysicsConstants& physics);

// If absorption happens the field component is exactly the vacuum and the
// electron leaves in the channel plane wave.
struct PostAbsorptionState {
    PhotonState field;
    ElectronChannel electron;
};

PostAbsorptionState post_absorption_state(const PhotonState& state, const ElectronChannel& channel);

// Fock-sector overlap <a|b> within the vacuum-plus-one-photon sector.
Complex state_overlap(const PhotonState& a, const PhotonState& b);

}  // namespace mzp
