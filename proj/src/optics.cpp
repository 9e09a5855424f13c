#include "mzp/optics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mzp/circuit_parser.hpp"

namespace mzp {

namespace {

const Complex kReflection = Complex{0.0, 1.0} / std::sqrt(2.0);  // e^{i pi/2}/sqrt(2)
const Complex kTransmission = Complex{1.0, 0.0} / std::sqrt(2.0);

double element_phase(const OpticalElement& element, double phi) {
    return element.phase_from_config ? phi : element.phase;
}

}  // namespace

bool CircuitDescription::is_vacuum_beam(const std::string& label) const {
    return std::find(vacuum_beams.begin(), vacuum_beams.end(), label) != vacuum_beams.end();
}

BeamAmplitudes apply_element(const BeamAmplitudes& amplitudes, const OpticalElement& element,
                             const CircuitDescription& circuit, double phi) {
    auto amplitude_of = [&](const std::string& beam) -> Complex {
        const auto it = amplitudes.find(beam);
        if (it != amplitudes.end()) return it->second;
        if (circuit.is_vacuum_beam(beam)) return Complex{0.0, 0.0};
        throw std::runtime_error("routing mismatch: element expects beam '" + beam +
                                 "' which is not live (line " + std::to_string(element.line) + ")");
    };

    BeamAmplitudes out = amplitudes;
    switch (element.kind) {
        case OpticalElement::Kind::Mirror:
            out[element.inputs[0]] = amplitude_of(element.inputs[0]) * Complex{0.0, 1.0};
            break;
        case OpticalElement::Kind::PhaseShifter:
            out[element.inputs[0]] =
                amplitude_of(element.inputs[0]) * std::polar(1.0, element_phase(element, phi));
            break;
        case OpticalElement::Kind::BeamSplitter: {
            const Complex a1 = amplitude_of(element.inputs[0]);
            const Complex a2 =
                element.inputs.size() > 1 ? amplitude_of(element.inputs[1]) : Complex{0.0, 0.0};
            for (const auto& in : element.inputs) out.erase(in);
            out[element.outputs[0]] = kReflection * a1 + kTransmission * a2;
            out[element.outputs[1]] = kTransmission * a1 + kReflection * a2;
            break;
        }
    }
    return out;
}

BeamAmplitudes fold_circuit(const CircuitDescription& circuit, double phi,
                            std::size_t element_count) {
    BeamAmplitudes amplitudes{{circuit.input_beam, Complex{1.0, 0.0}}};
    for (std::size_t i = 0; i < element_count && i < circuit.elements.size(); ++i)
        amplitudes = apply_element(amplitudes, circuit.elements[i], circuit, phi);
    return amplitudes;
}

std::optional<StandardMziRoles> match_standard_mzi(const CircuitDescription& circuit) {
    if (circuit.elements.size() != 5) return std::nullopt;
    const OpticalElement& first = circuit.elements.front();
    const OpticalElement& last = circuit.elements.back();
    if (first.kind != OpticalElement::Kind::BeamSplitter ||
        last.kind != OpticalElement::Kind::BeamSplitter)
        return std::nullopt;

    // First splitter: single live input (a second declared-vacuum port is fine).
    if (first.inputs[0] != circuit.input_beam) return std::nullopt;
    if (first.inputs.size() > 1 && !circuit.is_vacuum_beam(first.inputs[1])) return std::nullopt;
    const std::string beta = first.outputs[0];   // reflected
    const std::string alpha = first.outputs[1];  // transmitted

    // Middle: one mirror per arm plus a phase shifter on the reflected arm.
    int mirrors_alpha = 0;
    int mirrors_beta = 0;
    int phases_beta = 0;
    for (std::size_t i = 1; i + 1 < circuit.elements.size(); ++i) {
        const OpticalElement& e = circuit.elements[i];
        if (e.kind == OpticalElement::Kind::Mirror) {
            if (e.inputs[0] == alpha)
                ++mirrors_alpha;
            else if (e.inputs[0] == beta)
                ++mirrors_beta;
            else
                return std::nullopt;
        } else if (e.kind == OpticalElement::Kind::PhaseShifter) {
            if (e.inputs[0] != beta || !e.phase_from_config) return std::nullopt;
            ++phases_beta;
        } else {
            return std::nullopt;
        }
    }
    if (mirrors_alpha != 1 || mirrors_beta != 1 || phases_beta != 1) return std::nullopt;

    if (last.inputs.size() != 2 || last.inputs[0] != alpha || last.inputs[1] != beta)
        return std::nullopt;
    return StandardMziRoles{alpha, beta, last.outputs[0], last.outputs[1]};
}

std::string standard_mzi_text() {
    return "# Mach-Zehnder: splitter, mirrored arms, phase shifter, recombiner\n"
           "BS in -> beta, alpha\n"
           "MIRROR alpha\n"
           "MIRROR beta\n"
           "PHASE beta phi\n"
           "BS alpha, beta -> c, d\n"
           "DETECT c after\n"
           "DETECT d after\n";
}

CircuitDescription standard_mzi_circuit() { return parse_circuit(standard_mzi_text()); }

BeamModeMap standard_beam_mode_map(int mu) {
    const Int3 plus_x{1, 0, 0};
    const Int3 plus_y{0, 1, 0};
    return BeamModeMap{{"in", ModeIndex{plus_x, mu}},
                       {"alpha", ModeIndex{plus_y, mu}},
                       {"beta", ModeIndex{plus_x, mu}},
                       {"c", ModeIndex{plus_x, mu}},
                       {"d", ModeIndex{plus_y, mu}}};
}

namespace {

std::size_t region_element_count(const CircuitDescription& circuit, Region region) {
    switch (region) {
        case Region::Input:
            return 0;
        case Region::II:
            return circuit.elements.size();
        case Region::I: {
            // Everything before the recombiner.
            for (std::size_t i = circuit.elements.size(); i-- > 0;) {
                if (circuit.elements[i].kind == OpticalElement::Kind::BeamSplitter && i > 0)
                    return i;
            }
            return circuit.elements.size();
        }
    }
    return 0;
}

PhotonState state_from_amplitudes(const BeamAmplitudes& amplitudes,
                                  std::shared_ptr<const ModeSet> modes,
                                  const BeamModeMap& beam_modes) {
    std::vector<std::pair<ModeIndex, Complex>> coeffs;
    for (const auto& [label, amp] : amplitudes) {
        const auto it = beam_modes.find(label);
        if (it == beam_modes.end())
            throw std::runtime_error("no mode assignment for beam '" + label + "'");
        coeffs.emplace_back(it->second, amp);
    }
    return PhotonState::superposition(std::move(modes), std::move(coeffs));
}

}  // namespace

PhotonState region_state_generic(const CircuitDescription& circuit, double phi, Region region,
                                 std::shared_ptr<const ModeSet> modes,
                                 const BeamModeMap& beam_modes) {
    const BeamAmplitudes amplitudes =
        fold_circuit(circuit, phi, region_element_count(circuit, region));
    return state_from_amplitudes(amplitudes, std::move(modes), beam_modes);
}

PhotonState region_state(const CircuitDescription& circuit, double phi, Region region,
                         std::shared_ptr<const ModeSet> modes, const BeamModeMap& beam_modes) {
    const auto roles = match_standard_mzi(circuit);
    if (!roles) return region_state_generic(circuit, phi, region, std::move(modes), beam_modes);

    const Complex i{0.0, 1.0};
    const Complex eiphi = std::polar(1.0, phi);
    switch (region) {
        case Region::Input:
            return PhotonState::single(std::move(modes), beam_modes.at(circuit.input_beam));
        case Region::I:
            return PhotonState::superposition(
                std::move(modes), {{beam_modes.at(roles->alpha), i / std::sqrt(2.0)},
                                   {beam_modes.at(roles->beta), -eiphi / std::sqrt(2.0)}});
        case Region::II:
            return PhotonState::superposition(
                std::move(modes), {{beam_modes.at(roles->out_c), -(1.0 + eiphi) / 2.0},
                                   {beam_modes.at(roles->out_d), i * (1.0 - eiphi) / 2.0}});
    }
    throw std::logic_error("unreachable region");
}

const BeamConstants& RegionConstants::beam(const std::string& label) const {
    for (const auto& b : beams)
        if (b.label == label) return b;
    throw std::out_of_range("no beam '" + label + "' in this region");
}

MatchedConstants match_constants(double q0, double theta0, double phi,
                                 const PhysicsConstants& physics, const BeamModeMap& beam_modes) {
    if (q0 <= 0.0) throw std::invalid_argument("q0 must be positive");
    const double omega = physics.hbar * physics.c * physics.c / (2.0 * q0 * q0);
    const double extinction_tol = 1e-12 * q0;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    MatchedConstants m;
    m.input.region = Region::Input;
    m.input.phi = phi;
    m.input.q0 = q0;
    m.input.theta0 = theta0;
    m.input.omega = omega;
    m.input.beams = {BeamConstants{"in", beam_modes.at("in"), q0, theta0, 2.0, false}};

    m.region_i = m.input;
    m.region_i.region = Region::I;
    m.region_i.beams = {
        BeamConstants{"alpha", beam_modes.at("alpha"), q0 * inv_sqrt2, theta0 - kPi / 2.0, 1.0,
                      false},
        BeamConstants{"beta", beam_modes.at("beta"), q0 * inv_sqrt2, theta0 - phi - kPi, 1.0,
                      false}};

    const double c0 = q0 * std::cos(0.5 * phi);
    const double d0 = -q0 * std::sin(0.5 * phi);
    const double output_phase = theta0 - 0.5 * phi - kPi;
    m.region_ii = m.input;
    m.region_ii.region = Region::II;
    m.region_ii.beams = {BeamConstants{"c", beam_modes.at("c"), c0, output_phase,
                                       1.0 + std::cos(phi), std::abs(c0) < extinction_tol},
                         BeamConstants{"d", beam_modes.at("d"), d0, output_phase,
                                       1.0 - std::cos(phi), std::abs(d0) < extinction_tol}};
    return m;
}

double beam_frequency(const BeamConstants& beam, const PhysicsConstants& physics) {
    if (beam.extinguished)
        throw std::domain_error("nonclassical frequency undefined for extinguished beam '" +
                                beam.label + "'");
    return physics.hbar * physics.c * physics.c * beam.omega_weight /
           (4.0 * beam.amplitude * beam.amplitude);
}

RegionConstants trace_constants(const CircuitDescription& circuit, double q0, double theta0,
                                double phi, Region region, const PhysicsConstants& physics,
                                const BeamModeMap& beam_modes) {
    const BeamAmplitudes amplitudes =
        fold_circuit(circuit, phi, region_element_count(circuit, region));
    RegionConstants constants;
    constants.region = region;
    constants.phi = phi;
    constants.q0 = q0;
    constants.theta0 = theta0;
    constants.omega = physics.hbar * physics.c * physics.c / (2.0 * q0 * q0);
    for (const auto& [label, coeff] : amplitudes) {
        BeamConstants beam;
        beam.label = label;
        beam.mode = beam_modes.at(label);
        beam.amplitude = q0 * std::abs(coeff);
        beam.phase = std::abs(coeff) > 0.0 ? theta0 - std::arg(coeff) : 0.0;
        beam.omega_weight = 2.0 * std::norm(coeff);
        beam.extinguished = std::abs(coeff) < 1e-12;
        constants.beams.push_back(beam);
    }
    return constants;
}

}  // namespace mzp
