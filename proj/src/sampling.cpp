#include "mzp/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace mzp {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over (seed, stream)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return std::generate_canonical<double, 53>(engine_);
}

double Rng::uniform_positive() {
    return 1.0 - uniform();
}

double Rng::gaussian(double stddev) {
    const double u1 = uniform_positive();
    const double u2 = uniform();
    return stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double Rng::exponential() {
    return -std::log(uniform_positive());
}

FieldConfiguration sample_ground_configuration(std::shared_ptr<const ModeSet> modes,
                                               const PhysicsConstants& physics,
                                               std::uint64_t seed) {
    if (modes->size() == 0) throw std::invalid_argument("mode set is empty");
    Rng rng(seed);
    FieldConfiguration config(std::move(modes), 0.0);
    const ModeSet& set = config.modes();
    for (std::size_t i = 0; i < set.size(); ++i) {
        const double stddev = std::sqrt(physics.hbar * physics.c / (2.0 * set.entry(i).kappa));
        const double re = rng.gaussian(stddev);
        const double im = rng.gaussian(stddev);
        config.set_coordinate(i, Complex{re, im});
    }
    return config;
}

PhotonModeSample sample_photon_mode(double kappa0, const PhysicsConstants& physics, Rng& rng) {
    if (kappa0 <= 0.0) throw std::invalid_argument("kappa0 must be positive");
    const double gamma2 = rng.exponential() + rng.exponential();
    PhotonModeSample sample;
    sample.amplitude = std::sqrt(physics.hbar * physics.c * gamma2 / kappa0);
    sample.phase = kTwoPi * rng.uniform();
    return sample;
}

PhotonModeSample sample_photon_mode(double kappa0, const PhysicsConstants& physics,
                                    std::uint64_t seed) {
    Rng rng(seed);
    return sample_photon_mode(kappa0, physics, rng);
}

}  // namespace mzp
