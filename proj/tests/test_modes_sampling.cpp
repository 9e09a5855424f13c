#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "mzp/field_config.hpp"
#include "mzp/modes.hpp"
#include "mzp/sampling.hpp"

using namespace mzp;

namespace {
const PhysicsConstants kNatural;
}

TEST_CASE("cutoff 1 lattice: 26 sites, 13 canonical pairs, 26 canonical entries") {
    const ModeSet modes = ModeSet::build(BoxGeometry{kTwoPi, 1});
    CHECK(modes.lattice_site_count() == 26);
    CHECK(modes.canonical_pair_count() == 13);
    CHECK(modes.size() == 26);

    // Each canonical n is lexicographically positive and unique; partners are absent.
    std::set<Int3> seen;
    for (const auto& entry : modes.entries()) {
        CHECK(lexicographically_positive(entry.index.n));
        seen.insert(entry.index.n);
        CHECK(!modes.find(ModeIndex{-entry.index.n, entry.index.mu}).has_value());
    }
    CHECK(seen.size() == 13);

    // The standard interferometer modes are canonical and included.
    CHECK(modes.find(ModeIndex{{1, 0, 0}, 2}).has_value());
    CHECK(modes.find(ModeIndex{{0, 1, 0}, 2}).has_value());
}

TEST_CASE("cutoff 2 lattice: 124 sites / 62 pairs / 124 entries") {
    const ModeSet modes = ModeSet::build(BoxGeometry{kTwoPi, 2});
    CHECK(modes.lattice_site_count() == 124);
    CHECK(modes.canonical_pair_count() == 62);
    CHECK(modes.size() == 124);
}

TEST_CASE("cutoff 0 is an empty-lattice error") {
    CHECK_THROWS_AS(ModeSet::build(BoxGeometry{kTwoPi, 0}), std::invalid_argument);
}

TEST_CASE("polarization basis is transverse, orthonormal, and pair-consistent") {
    const ModeSet modes = ModeSet::build(BoxGeometry{kTwoPi, 2});
    for (const auto& entry : modes.entries()) {
        CHECK(std::abs(dot(entry.polarization, entry.k)) < 1e-12);
        CHECK(norm(entry.polarization) == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (std::size_t i = 0; i < modes.size(); i += 2) {
        const Vec3 eps1 = modes.entry(i).polarization;
        const Vec3 eps2 = modes.entry(i + 1).polarization;
        CHECK(std::abs(dot(eps1, eps2)) < 1e-12);
        // Convention eps_{-k,mu} = eps_{k,mu} is what the derived-partner rule assumes.
        CHECK(norm(polarization_vector(modes.entry(i).k, 1) - eps1) < 1e-12);
    }
}

TEST_CASE("zero-point energy is the entry sum of hbar c kappa / 2") {
    const ModeSet modes = ModeSet::build(BoxGeometry{kTwoPi, 1});
    // 13 canonical wave vectors: 3 axis (k=1), 6 face diagonal (sqrt 2), 4 cube diagonal (sqrt 3),
    // each counted twice for the two polarizations, times hbar c / 2.
    const double expected = 3.0 + 6.0 * std::sqrt(2.0) + 4.0 * std::sqrt(3.0);
    CHECK(modes.zero_point_energy(kNatural) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("ground-state sampling: quadrature variance hbar c / 2 kappa") {
    const auto modes = std::make_shared<const ModeSet>(ModeSet::build(BoxGeometry{kTwoPi, 1}));
    const std::size_t trials = 100000;
    const auto axis_entry = *modes->find(ModeIndex{{1, 0, 0}, 1});  // kappa = 1
    const auto diag_entry = *modes->find(ModeIndex{{1, 1, 0}, 1});  // kappa = sqrt 2

    double sum_re = 0.0, sum_re2 = 0.0, sum_abs2_diag = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const FieldConfiguration config =
            sample_ground_configuration(modes, kNatural, derive_seed(42, trial));
        const double re = config.coordinate(axis_entry).real();
        sum_re += re;
        sum_re2 += re * re;
        sum_abs2_diag += std::norm(config.coordinate(diag_entry));
    }
    const double n = static_cast<double>(trials);
    const double mean = sum_re / n;
    const double variance = sum_re2 / n - mean * mean;

    // Var(f) = hbar c / 2 kappa; the sample variance of a Gaussian has
    // standard error variance * sqrt(2/N).
    const double expected = 0.5;
    const double stderr3 = 3.0 * expected * std::sqrt(2.0 / n);
    CHECK(std::abs(variance - expected) < stderr3);

    // E|q|^2 = hbar c / kappa at kappa = sqrt 2.
    const double expected_abs2 = 1.0 / std::sqrt(2.0);
    const double se_abs2 = 3.0 * expected_abs2 * std::sqrt(2.0 / n);
    CHECK(std::abs(sum_abs2_diag / n - expected_abs2) < se_abs2);
}

TEST_CASE("ground-state sampling is reproducible from the seed") {
    const auto modes = std::make_shared<const ModeSet>(ModeSet::build(BoxGeometry{kTwoPi, 1}));
    const FieldConfiguration a = sample_ground_configuration(modes, kNatural, 123);
    const FieldConfiguration b = sample_ground_configuration(modes, kNatural, 123);
    for (std::size_t i = 0; i < modes->size(); ++i)
        CHECK(a.coordinate(i) == b.coordinate(i));
}

TEST_CASE("photon-mode sampling: E[q0^2] = 2 hbar c / kappa0 and scaling") {
    const std::size_t trials = 100000;
    double sum_sq = 0.0, sum_sq_rescaled = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        sum_sq += std::pow(sample_photon_mode(1.0, kNatural, derive_seed(7, trial)).amplitude, 2);
        sum_sq_rescaled +=
            std::pow(sample_photon_mode(4.0, kNatural, derive_seed(7, trial)).amplitude, 2);
    }
    const double n = static_cast<double>(trials);
    // q0^2 = (hbar c / kappa0) * Gamma(2,1): mean 2 hbar c / kappa0, sd sqrt(2) hbar c / kappa0.
    const double se3 = 3.0 * std::sqrt(2.0) / std::sqrt(n);
    CHECK(std::abs(sum_sq / n - 2.0) < se3);
    // kappa0 -> 4 kappa0 rescales E[q0^2] by 1/4.
    CHECK(std::abs(sum_sq_rescaled / n - 0.5) < 0.25 * se3);
}

TEST_CASE("photon-mode phase is uniform (Kolmogorov-Smirnov at 1%)") {
    const std::size_t trials = 20000;
    std::vector<double> phases;
    phases.reserve(trials);
    for (std::size_t trial = 0; trial < trials; ++trial)
        phases.push_back(sample_photon_mode(1.0, kNatural, derive_seed(99, trial)).phase);
    std::sort(phases.begin(), phases.end());
    double d_stat = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        const double cdf = phases[i] / kTwoPi;
        const double hi = static_cast<double>(i + 1) / static_cast<double>(trials);
        const double lo = static_cast<double>(i) / static_cast<double>(trials);
        d_stat = std::max({d_stat, std::abs(cdf - hi), std::abs(cdf - lo)});
    }
    // 1% critical value for the one-sample KS statistic.
    CHECK(d_stat < 1.628 / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("reality pairing: derived partner is the conjugate and is idempotent") {
    const auto modes = std::make_shared<const ModeSet>(ModeSet::build(BoxGeometry{kTwoPi, 1}));
    FieldConfiguration config = sample_ground_configuration(modes, kNatural, 5);
    for (std::size_t i = 0; i < modes->size(); ++i) {
        const ModeIndex canon = modes->entry(i).index;
        const ModeIndex partner{-canon.n, canon.mu};
        CHECK(config.site_coordinate(partner) == std::conj(config.coordinate(i)));
        CHECK(std::conj(config.partner_coordinate(i)) == config.coordinate(i));
    }
}

TEST_CASE("sampled configurations reconstruct a real vector potential") {
    const auto modes = std::make_shared<const ModeSet>(ModeSet::build(BoxGeometry{kTwoPi, 2}));
    const FieldConfiguration config = sample_ground_configuration(modes, kNatural, 17);
    Rng rng(31);
    for (int probe = 0; probe < 50; ++probe) {
        const Vec3 x{kTwoPi * rng.uniform(), kTwoPi * rng.uniform(), kTwoPi * rng.uniform()};
        for (int component = 0; component < 3; ++component)
            CHECK(std::abs(vector_potential_component_site_sum(config, x, component).imag()) <
                  1e-12);
    }
}

TEST_CASE("configuration JSON round trip") {
    const auto modes = std::make_shared<const ModeSet>(ModeSet::build(BoxGeometry{kTwoPi, 1}));
    const FieldConfiguration config = sample_ground_configuration(modes, kNatural, 11);
    const FieldConfiguration restored = FieldConfiguration::from_json(config.to_json(), modes);
    CHECK(restored.time() == config.time());
    for (std::size_t i = 0; i < modes->size(); ++i)
        CHECK(restored.coordinate(i) == config.coordinate(i));
}
