#include "mzp/modes.hpp"

#include <algorithm>
#include <stdexcept>

namespace mzp {

Vec3 polarization_vector(const Vec3& k, int mu) {
    if (mu != 1 && mu != 2) throw std::invalid_argument("polarization label must be 1 or 2");
    const Vec3 khat = normalized(k);
    const Vec3 zhat{0.0, 0.0, 1.0};
    Vec3 eps1 = cross(khat, zhat);
    if (norm(eps1) < 1e-12) {
        eps1 = Vec3{1.0, 0.0, 0.0};  // k parallel to zhat
    } else {
        eps1 = normalized(eps1);
    }
    if (mu == 1) return eps1;
    return cross(khat, eps1);
}

ModeSet ModeSet::build(const BoxGeometry& geometry) {
    if (geometry.side_length <= 0.0) throw std::invalid_argument("box side length must be positive");
    if (geometry.cutoff < 1) throw std::invalid_argument("empty mode lattice: cutoff must be >= 1");

    ModeSet set;
    set.geometry_ = geometry;
    const int cut = geometry.cutoff;
    const double k_unit = kTwoPi / geometry.side_length;

    for (int nx = -cut; nx <= cut; ++nx) {
        for (int ny = -cut; ny <= cut; ++ny) {
            for (int nz = -cut; nz <= cut; ++nz) {
                const Int3 n{nx, ny, nz};
                if (n.is_zero() || !lexicographically_positive(n)) continue;
                const Vec3 k{k_unit * nx, k_unit * ny, k_unit * nz};
                for (int mu = 1; mu <= 2; ++mu) {
                    set.entries_.push_back(ModeEntry{ModeIndex{n, mu}, k, norm(k),
                                                     polarization_vector(k, mu)});
                }
            }
        }
    }
    std::sort(set.entries_.begin(), set.entries_.end(),
              [](const ModeEntry& a, const ModeEntry& b) { return a.index < b.index; });
    return set;
}

std::optional<std::size_t> ModeSet::find(const ModeIndex& m) const {
    const auto it = std::lower_bound(
        entries_.begin(), entries_.end(), m,
        [](const ModeEntry& e, const ModeIndex& key) { return e.index < key; });
    if (it == entries_.end() || !(it->index == m)) return std::nullopt;
    return static_cast<std::size_t>(it - entries_.begin());
}

double ModeSet::zero_point_energy(const PhysicsConstants& physics) const {
    // Each canonical (k, mu) entry carries hbar*c*kappa/2; summed over entries this
    // equals the site sum of hbar*c*k/2 (a +-pair contributes its kappa twice either way).
    double sum = 0.0;
    for (const auto& e : entries_) sum += 0.5 * physics.hbar * physics.c * e.kappa;
    return sum;
}

}  // namespace mzp
