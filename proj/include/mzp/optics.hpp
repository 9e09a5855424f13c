#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mzp/core.hpp"
#include "mzp/photon_state.hpp"

namespace mzp {

// Elements act with fixed unitary factors: e^{i pi/2}/sqrt(2) per beam-splitter
// reflection, 1/sqrt(2) per transmission, e^{i pi/2} at a mirror, e^{i phi} at
// the phase shifter. Polarization and |k| are unchanged.
struct OpticalElement {
    enum class Kind { BeamSplitter, Mirror, PhaseShifter };

    Kind kind = Kind::Mirror;
    std::vector<std::string> inputs;    // 1 beam (mirror/phase), 1-2 beams (splitter)
    std::vector<std::string> outputs;   // splitter: {reflected-of-first, transmitted-of-first}
    double phase = 0.0;                 // phase shifter parameter
    bool phase_from_config = false;     // `phi` placeholder in the DSL
    int line = 0;                       // source line, for diagnostics
};

struct DetectorPlacement {
    std::string beam;
    bool before_recombiner = false;  // which-path position vs interference position
};

struct CircuitDescription {
    std::vector<OpticalElement> elements;
    std::vector<DetectorPlacement> detectors;
    std::string input_beam;
    std::vector<std::string> vacuum_beams;

    bool is_vacuum_beam(const std::string& label) const;
};

// Beam-label amplitudes while folding a circuit; the label set changes as
// splitters consume and produce beams.
using BeamAmplitudes = std::map<std::string, Complex>;

BeamAmplitudes apply_element(const BeamAmplitudes& amplitudes, const OpticalElement& element,
                             const CircuitDescription& circuit, double phi);

// Fold the first `element_count` elements over a unit-amplitude input beam.
BeamAmplitudes fold_circuit(const CircuitDescription& circuit, double phi,
                            std::size_t element_count);

enum class Region { Input, I, II };

// Beam label -> plane-wave mode carrying that beam in its region.
using BeamModeMap = std::map<std::string, ModeIndex>;

// Standard Mach-Zehnder roles once a circuit is recognized as the
// splitter / two mirrors / one arm phase / recombiner pipeline.
struct StandardMziRoles {
    std::string alpha;  // transmitted at the first splitter, mirror only
    std::string beta;   // reflected at the first splitter, mirror + phase shifter
    std::string out_c;  // reflected-alpha + transmitted-beta
    std::string out_d;  // transmitted-alpha + reflected-beta
};

std::optional<StandardMziRoles> match_standard_mzi(const CircuitDescription& circuit);

// The shipped interferometer description (also the golden parse fixture).
std::string standard_mzi_text();
CircuitDescription standard_mzi_circuit();

// In-plane beam directions for the standard layout: input +x, alpha arm +y
// after its mirror, beta arm +x after its mirror, outputs c:+x, d:+y. With
// mu = 2 every beam shares one transverse polarization vector.
BeamModeMap standard_beam_mode_map(int mu = 2);

// Closed-form region coefficients for the standard circuit; anything else
// falls back to element-by-element application. Zero-amplitude (extinguished)
// coefficients are kept as explicit entries.
PhotonState region_state(const CircuitDescription& circuit, double phi, Region region,
                         std::shared_ptr<const ModeSet> modes, const BeamModeMap& beam_modes);

// Element-by-element route, used directly for nonstandard circuits and as the
// cross-check for the closed form.
PhotonState region_state_generic(const CircuitDescription& circuit, double phi, Region region,
                                 std::shared_ptr<const ModeSet> modes,
                                 const BeamModeMap& beam_modes);

struct BeamConstants {
    std::string label;
    ModeIndex mode;
    double amplitude = 0.0;     // signed, e.g. d0 = -q0 sin(phi/2)
    double phase = 0.0;
    double omega_weight = 0.0;  // per-beam frequency = hbar c^2 * weight / (4 amplitude^2)
    bool extinguished = false;
};

// Analytic integration constants of one region: q*_b(t) = amplitude_b *
// exp(i(omega t + phase_b)), background coordinates frozen.
struct RegionConstants {
    Region region = Region::Input;
    double phi = 0.0;
    double q0 = 0.0;
    double theta0 = 0.0;
    double omega = 0.0;  // common nonclassical frequency hbar c^2 / (2 q0^2)
    std::vector<BeamConstants> beams;

    const BeamConstants& beam(const std::string& label) const;
};

struct MatchedConstants {
    RegionConstants input;
    RegionConstants region_i;
    RegionConstants region_ii;

    const RegionConstants& at(Region r) const {
        return r == Region::Input ? input : (r == Region::I ? region_i : region_ii);
    }
};

// Constants matched across the three regions by tracing the input beable
// through the elements:
//   alpha0 = beta0 = q0/sqrt(2),  sigma0 = theta0 - pi/2,  tau0 = theta0 - phi - pi,
//   c0 = q0 cos(phi/2),  d0 = -q0 sin(phi/2),  chi0 = xi0 = theta0 - phi/2 - pi,
// with one shared nonclassical frequency. Extinguished beams (c0 at phi = pi,
// d0 at phi = 0) are flagged and excluded from per-beam frequency formulas.
MatchedConstants match_constants(double q0, double theta0, double phi,
                                 const PhysicsConstants& physics,
                                 const BeamModeMap& beam_modes);

// Per-beam nonclassical frequency hbar c^2 w / (4 a^2); throws on extinguished beams.
double beam_frequency(const BeamConstants& beam, const PhysicsConstants& physics);

// Independent route to the same constants: per-beam (amplitude, phase) from the
// product of element factors along the circuit, amplitude q0 |c_b|, phase
// theta0 - arg(c_b).
RegionConstants trace_constants(const CircuitDescription& circuit, double q0, double theta0,
                                double phi, Region region, const PhysicsConstants& physics,
                                const BeamModeMap& beam_modes);

}  // namespace mzp
