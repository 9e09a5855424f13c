#pragma once

#include <vector>

#include "mzp/core.hpp"
#include "mzp/field_config.hpp"
#include "mzp/photon_state.hpp"

namespace mzp {

inline constexpr double kDefaultNodeTolerance = 1e-12;

// The one-photon overlap sum_j conj(c_j) q_j. The state has a node (undefined
// guidance field) where this vanishes; its modulus is conserved by the flow.
Complex superposition_sum(const PhotonState& state, const FieldConfiguration& config);

// S and its nonzero partial derivatives. For the one-photon sector
//   S = hbar * arg(sum_j c_j q*_j) - (hbar c kappa0 + E_zp) t,
// evaluated on the principal branch; gradient entries are aligned with
// state.excited() and vanish identically on background modes.
struct PhaseFunction {
    double value = 0.0;                  // S, principal branch
    double time_coefficient = 0.0;       // -dS/dt = hbar c kappa0 + E_zp
    std::vector<Complex> gradient;       // dS/dq_j per excited mode
    double node_distance = 0.0;          // |sum_j conj(c_j) q_j|
};

PhaseFunction phase_function(const PhotonState& state, const FieldConfiguration& config, double t,
                             const PhysicsConstants& physics,
                             double node_tolerance = kDefaultNodeTolerance);

// Closed form dS/dq_j = (i hbar / 2) conj(c_j) / sum_m conj(c_m) q_m for
// excited modes, zero for background modes.
std::vector<Complex> grad_s(const PhotonState& state, const FieldConfiguration& config,
                            const PhysicsConstants& physics,
                            double node_tolerance = kDefaultNodeTolerance);

// Q = -sum_(k mu) kappa^2 q* q + hbar c kappa0 + E_zp - (hbar c)^2 / (4 |sum_m conj(c_m) q_m|^2).
// The last term reduces to the two-arm and two-output closed forms
// (-(hbar c)^2 / 2 h* h and -(hbar c)^2 / h* h respectively).
double quantum_potential(const PhotonState& state, const FieldConfiguration& config,
                         const PhysicsConstants& physics,
                         double node_tolerance = kDefaultNodeTolerance);

// -dS/dt: the photon quantum plus the cutoff zero-point sum, region independent.
double total_energy(const PhotonState& state, const PhysicsConstants& physics);

// Continuity helper for the multivalued phase: shifts each sample by the 2*pi*hbar
// multiple that keeps consecutive differences in (-pi*hbar, pi*hbar].
std::vector<double> unwrap_phase_series(const std::vector<double>& s_values, double hbar);

}  // namespace mzp
