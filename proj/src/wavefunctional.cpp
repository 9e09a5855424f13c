#include "mzp/wavefunctional.hpp"

#include <cmath>

namespace mzp {

Complex superposition_sum(const PhotonState& state, const FieldConfiguration& config) {
    Complex sum{0.0, 0.0};
    for (const auto& e : state.excited()) sum += std::conj(e.coeff) * config.coordinate(e.entry);
    return sum;
}

PhaseFunction phase_function(const PhotonState& state, const FieldConfiguration& config, double t,
                             const PhysicsConstants& physics, double node_tolerance) {
    PhaseFunction result;
    result.time_coefficient = total_energy(state, physics);
    if (state.is_vacuum()) {
        result.value = -result.time_coefficient * t;
        return result;
    }
    const Complex overlap = superposition_sum(state, config);
    result.node_distance = std::abs(overlap);
    if (result.node_distance < node_tolerance) throw NodeError(result.node_distance);

    // arg(sum_j c_j q*_j) = -arg(sum_j conj(c_j) q_j)
    result.value = -physics.hbar * std::arg(overlap) - result.time_coefficient * t;
    result.gradient.reserve(state.excited().size());
    const Complex half_i_hbar{0.0, 0.5 * physics.hbar};
    for (const auto& e : state.excited())
        result.gradient.push_back(half_i_hbar * std::conj(e.coeff) / overlap);
    return result;
}

std::vector<Complex> grad_s(const PhotonState& state, const FieldConfiguration& config,
                            const PhysicsConstants& physics, double node_tolerance) {
    if (state.is_vacuum()) return {};
    const Complex overlap = superposition_sum(state, config);
    const double distance = std::abs(overlap);
    if (distance < node_tolerance) throw NodeError(distance);
    std::vector<Complex> grad;
    grad.reserve(state.excited().size());
    const Complex half_i_hbar{0.0, 0.5 * physics.hbar};
    for (const auto& e : state.excited()) grad.push_back(half_i_hbar * std::conj(e.coeff) / overlap);
    return grad;
}

double quantum_potential(const PhotonState& state, const FieldConfiguration& config,
                         const PhysicsConstants& physics, double node_tolerance) {
    const ModeSet& modes = config.modes();
    double quadratic = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i)
        quadratic += modes.entry(i).kappa * modes.entry(i).kappa * std::norm(config.coordinate(i));

    const double zero_point = modes.zero_point_energy(physics);
    if (state.is_vacuum()) return -quadratic + zero_point;

    const Complex overlap = superposition_sum(state, config);
    const double distance = std::abs(overlap);
    if (distance < node_tolerance) throw NodeError(distance);

    const double hc = physics.hbar * physics.c;
    return -quadratic + hc * state.kappa0() + zero_point -
           hc * hc / (4.0 * std::norm(overlap));
}

double total_energy(const PhotonState& state, const PhysicsConstants& physics) {
    return physics.hbar * physics.c * state.kappa0() +
           state.modes().zero_point_energy(physics);
}

std::vector<double> unwrap_phase_series(const std::vector<double>& s_values, double hbar) {
    std::vector<double> out = s_values;
    const double period = kTwoPi * hbar;
    double offset = 0.0;
    for (std::size_t i = 1; i < out.size(); ++i) {
        double diff = s_values[i] - s_values[i - 1];
        while (diff > 0.5 * period) {
            diff -= period;
            offset -= period;
        }
        while (diff <= -0.5 * period) {
            diff += period;
            offset += period;
        }
        out[i] = s_values[i] + offset;
    }
    return out;
}

}  // namespace mzp
