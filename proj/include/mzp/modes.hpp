#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mzp/core.hpp"

namespace mzp {

// One transverse normal mode of the periodic quantization box: a lattice
// wave vector k = 2*pi*n/L plus a polarization label mu in {1,2}.
struct ModeIndex {
    Int3 n;
    int mu = 1;

    friend constexpr bool operator==(const ModeIndex&, const ModeIndex&) = default;
    friend constexpr auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

// A lattice vector is "canonical" when it is lexicographically positive, i.e.
// its first nonzero component is > 0. Exactly one of {n, -n} is canonical, so
// canonical entries enumerate +-pairs without double counting.
constexpr bool lexicographically_positive(const Int3& n) {
    if (n.x != 0) return n.x > 0;
    if (n.y != 0) return n.y > 0;
    return n.z > 0;
}

constexpr bool is_canonical(const ModeIndex& m) { return lexicographically_positive(m.n); }

constexpr ModeIndex canonical_representative(const ModeIndex& m) {
    return is_canonical(m) ? m : ModeIndex{-m.n, m.mu};
}

struct BoxGeometry {
    double side_length = kTwoPi;  // L
    int cutoff = 1;               // max |n|_inf of retained background modes

    double volume() const { return side_length * side_length * side_length; }
};

// Real transverse polarization basis. eps_{k1} = normalize(k x zhat) with an
// xhat fallback for k parallel to zhat; eps_{k2} = khat x eps_{k1}. The basis
// is assigned to the canonical wave vector and reused for -k, which turns the
// reality constraint eps_{-k mu} q_{-k mu} = eps_{k mu} q*_{k mu} into the
// plain conjugate pairing q_{-k mu} = q*_{k mu}.
Vec3 polarization_vector(const Vec3& k, int mu);

struct ModeEntry {
    ModeIndex index;    // canonical
    Vec3 k;             // 2*pi*n/L
    double kappa = 0.0; // |k|
    Vec3 polarization;  // eps_{k mu}
};

// The ordered canonical mode list of a box: all (n, mu) with 1 <= |n|_inf <= cutoff,
// n lexicographically positive, sorted by (n, mu).
class ModeSet {
  public:
    static ModeSet build(const BoxGeometry& geometry);

    const BoxGeometry& geometry() const { return geometry_; }
    const std::vector<ModeEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const ModeEntry& entry(std::size_t i) const { return entries_[i]; }

    // Number of nonzero lattice sites inside the cutoff cube (both +-partners).
    std::size_t lattice_site_count() const { return entries_.size(); }
    std::size_t canonical_pair_count() const { return entries_.size() / 2; }

    // Index of a canonical ModeIndex in entry order.
    std::optional<std::size_t> find(const ModeIndex& m) const;

    // Cutoff-dependent vacuum energy: sum of hbar*c*kappa/2 over the lattice
    // sites, reported as-is and never compared against a continuum value.
    double zero_point_energy(const PhysicsConstants& physics) const;

  private:
    BoxGeometry geometry_;
    std::vector<ModeEntry> entries_;
};

}  // namespace mzp
