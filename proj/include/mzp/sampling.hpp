#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include "mzp/core.hpp"
#include "mzp/field_config.hpp"

namespace mzp {

// Deterministic stream-splitting so ensemble members can be sampled (and
// integrated) in parallel without sharing generator state.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Explicit samplers on top of mt19937_64 so outputs do not depend on the
// standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();                  // [0, 1)
    double uniform_positive();         // (0, 1]
    double gaussian(double stddev);    // Box-Muller, one fresh pair per call
    double exponential();              // mean 1

  private:
    std::mt19937_64 engine_;
};

// Vacuum-weighted background draw: each canonical coordinate is a complex
// Gaussian with density ~ exp(-kappa q*q / hbar c), i.e. independent
// quadratures of variance hbar c / 2 kappa.
FieldConfiguration sample_ground_configuration(std::shared_ptr<const ModeSet> modes,
                                               const PhysicsConstants& physics,
                                               std::uint64_t seed);

struct PhotonModeSample {
    double amplitude = 0.0;  // q0
    double phase = 0.0;      // theta0 in [0, 2*pi)
};

// Radial amplitude of the occupied mode, density ~ q0^3 exp(-kappa0 q0^2/hbar c)
// (the |q|^2 photon weight times the vacuum Gaussian times the polar Jacobian):
// kappa0 q0^2 / hbar c is Gamma(2,1), sampled exactly as a sum of two
// exponentials. The phase is uniform.
PhotonModeSample sample_photon_mode(double kappa0, const PhysicsConstants& physics, Rng& rng);
PhotonModeSample sample_photon_mode(double kappa0, const PhysicsConstants& physics,
                                    std::uint64_t seed);

}  // namespace mzp
