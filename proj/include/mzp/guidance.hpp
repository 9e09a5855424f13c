#pragma once

#include <cstdint>
#include <vector>

#include "mzp/core.hpp"
#include "mzp/field_config.hpp"
#include "mzp/optics.hpp"
#include "mzp/photon_state.hpp"
#include "mzp/wavefunctional.hpp"

namespace mzp {

// Equation of motion (1/c^2) dq*/dt = dS/dq, i.e. dq*_j/dt = (i hbar c^2 / 2)
// conj(c_j) / sum_m conj(c_m) q_m for excited modes and zero for background
// modes. Entries are aligned with state.excited().
std::vector<Complex> guidance_rhs(const PhotonState& state, const FieldConfiguration& config,
                                  const PhysicsConstants& physics,
                                  double node_tolerance = kDefaultNodeTolerance);

struct IntegratorControls {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double max_step = 0.0;  // <= 0: (t_end - t0) / 500
    double node_tolerance = kDefaultNodeTolerance;
    std::size_t samples = 256;  // uniform output samples after the initial one
};

struct TrajectoryDiagnostics {
    std::vector<double> energy;
    std::vector<double> quantum_potential;
    std::vector<double> node_distance;
    std::vector<double> ratio_drift;  // worst pairwise defect of q*_i/q*_j = conj(c_i)/conj(c_j)
    bool on_shell_initial = false;
    bool node_event = false;
    double node_time = 0.0;
};

// Uniformly sampled solution of the guidance flow. Background coordinates are
// constants of motion and live in `base`; per-sample vectors hold the excited
// coordinates q_j(t_k).
struct Trajectory {
    PhotonState state;
    FieldConfiguration base;
    std::vector<double> times;
    std::vector<std::vector<Complex>> excited_coords;
    TrajectoryDiagnostics diagnostics;

    FieldConfiguration configuration_at(std::size_t sample) const;
    std::size_t sample_count() const { return times.size(); }
};

// Adaptive embedded Dormand-Prince 5(4) on the excited coordinates. Terminates
// early with diagnostics.node_event when the flow enters the node tolerance.
Trajectory integrate(const PhotonState& state, const FieldConfiguration& config0, double t_end,
                     const IntegratorControls& controls, const PhysicsConstants& physics);

struct EnsembleMember {
    PhotonState state;
    FieldConfiguration config0;
};

// Members are independent; the parallel path distributes them over OpenMP
// threads and is sample-for-sample identical to the serial reference.
std::vector<Trajectory> integrate_ensemble_serial(const std::vector<EnsembleMember>& members,
                                                  double t_end, const IntegratorControls& controls,
                                                  const PhysicsConstants& physics);
std::vector<Trajectory> integrate_ensemble(const std::vector<EnsembleMember>& members,
                                           double t_end, const IntegratorControls& controls,
                                           const PhysicsConstants& physics);

// On-shell solution q*_b(t) = amplitude_b e^{i(omega t + phase_b)} for each
// beam, background frozen at its `background` values.
FieldConfiguration analytic_solution(const RegionConstants& constants,
                                     const FieldConfiguration& background, double t);

// Exact uniformly-sampled trajectory built from the analytic solution.
Trajectory analytic_trajectory(const PhotonState& state, const RegionConstants& constants,
                               const FieldConfiguration& background, double t_end,
                               std::size_t samples, const PhysicsConstants& physics);

// Exact second derivative of the conjugate coordinates along the flow,
//   (1/c^2) d2q*_j/dt2 = -(hbar^2 c^2 / 4) conj(c_j) / (Gbar^2 G),
// with Gbar = sum_m conj(c_m) q_m and G its conjugate. This is the wave
// equation with the quantum-potential force after the kappa^2 cancellation; it
// reduces to the printed two-arm and two-output region forms.
std::vector<Complex> second_derivative_conjugate(const PhotonState& state,
                                                 const FieldConfiguration& config,
                                                 const PhysicsConstants& physics,
                                                 double node_tolerance = kDefaultNodeTolerance);

// Defect of the second-order equation of motion along a uniformly sampled
// trajectory, per excited mode and interior sample: the 5-point finite
// difference of q* against the closed-form right-hand side.
struct WaveEquationResidual {
    std::vector<double> times;                       // interior samples
    std::vector<std::vector<double>> per_mode;       // [mode][sample]
    double max_residual = 0.0;
};

WaveEquationResidual wave_equation_residual(const PhotonState& state, const Trajectory& trajectory,
                                            const PhysicsConstants& physics);

}  // namespace mzp
