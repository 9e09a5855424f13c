#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mzp/core.hpp"
#include "mzp/modes.hpp"

namespace mzp {

struct ExcitedMode {
    std::size_t entry = 0;  // index into the ModeSet
    Complex coeff;          // single-photon amplitude, splitter factors absorbed
};

// Vacuum-plus-one-photon sector state: a normalized superposition of
// single-quantum excitations over modes of a common magnitude kappa0.
class PhotonState {
  public:
    PhotonState() = default;

    static PhotonState vacuum(std::shared_ptr<const ModeSet> modes);
    // One quantum in a single canonical mode, coefficient 1.
    static PhotonState single(std::shared_ptr<const ModeSet> modes, const ModeIndex& mode);
    static PhotonState superposition(std::shared_ptr<const ModeSet> modes,
                                     std::vector<std::pair<ModeIndex, Complex>> coeffs);

    const ModeSet& modes() const { return *modes_; }
    const std::shared_ptr<const ModeSet>& modes_ptr() const { return modes_; }
    const std::vector<ExcitedMode>& excited() const { return excited_; }
    bool is_vacuum() const { return excited_.empty(); }

    double kappa0() const { return kappa0_; }

    // Sum of |c_j|^2; 1 for a physical state.
    double norm_squared() const;
    bool is_normalized(double tol = 1e-12) const;

    bool is_excited_entry(std::size_t entry) const;

    std::string to_json() const;
    static PhotonState from_json(const std::string& text, std::shared_ptr<const ModeSet> modes);

  private:
    std::shared_ptr<const ModeSet> modes_;
    std::vector<ExcitedMode> excited_;
    double kappa0_ = 0.0;
};

}  // namespace mzp
