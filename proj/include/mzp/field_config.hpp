#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mzp/core.hpp"
#include "mzp/modes.hpp"

namespace mzp {

// A field beable: one complex normal-mode coordinate q_{k mu} per canonical
// entry. The -k partner coordinate is never stored; it is derived through the
// reality pairing q_{-k mu} = q*_{k mu} (with the shared polarization basis).
class FieldConfiguration {
  public:
    FieldConfiguration() = default;
    FieldConfiguration(std::shared_ptr<const ModeSet> modes, double time = 0.0)
        : modes_(std::move(modes)), coords_(modes_->size(), Complex{0.0, 0.0}), time_(time) {}

    const ModeSet& modes() const { return *modes_; }
    const std::shared_ptr<const ModeSet>& modes_ptr() const { return modes_; }

    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    Complex coordinate(std::size_t i) const { return coords_[i]; }
    void set_coordinate(std::size_t i, Complex q) { coords_[i] = q; }
    Complex conjugate_coordinate(std::size_t i) const { return std::conj(coords_[i]); }

    const std::vector<Complex>& coordinates() const { return coords_; }
    std::vector<Complex>& coordinates() { return coords_; }

    // Coordinate of an arbitrary lattice site, canonical or not.
    Complex site_coordinate(const ModeIndex& m) const;

    // Applying the pairing map twice returns the stored coordinate.
    Complex partner_coordinate(std::size_t i) const { return std::conj(coords_[i]); }

    std::string to_json() const;
    static FieldConfiguration from_json(const std::string& text,
                                        std::shared_ptr<const ModeSet> modes);

  private:
    std::shared_ptr<const ModeSet> modes_;
    std::vector<Complex> coords_;
    double time_ = 0.0;
};

// Literal site-sum of the vector potential over both +-partners, kept in
// complex arithmetic so tests can assert the imaginary residue vanishes.
Complex vector_potential_component_site_sum(const FieldConfiguration& config, const Vec3& x,
                                            int component);

}  // namespace mzp
