#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mzp/core.hpp"
#include "mzp/field_config.hpp"
#include "mzp/guidance.hpp"
#include "mzp/optics.hpp"
#include "mzp/photon_state.hpp"

namespace mzp {

struct GridSpec {
    Vec3 origin;
    Vec3 step;
    std::size_t nx = 1, ny = 1, nz = 1;

    std::size_t point_count() const { return nx * ny * nz; }
    std::vector<Vec3> points() const;
};

// n^3 cells over [0,L)^3; the rectangle rule on this grid integrates every
// lattice harmonic with |dn| < n exactly, so box averages of the beables are
// quadrature-exact once n exceeds twice the cutoff.
GridSpec uniform_box_grid(const BoxGeometry& geometry, std::size_t n);

struct FieldSnapshot {
    double time = 0.0;
    std::vector<Vec3> positions;
    std::vector<Vec3> vector_potential;
    std::vector<Vec3> electric_field;
    std::vector<Vec3> magnetic_induction;
    std::vector<Vec3> intensity;
};

// Point evaluator bound to one (state, configuration) pair. A and B are plain
// mode sums over both +-partners; E sums the phase gradient over the excited
// modes; the intensity is the Poynting form I = c E x B, which equals the
// double mode sum of the momentum-density beable identically.
class BeableEvaluator {
  public:
    BeableEvaluator(const PhotonState& state, const FieldConfiguration& config,
                    const PhysicsConstants& physics,
                    double node_tolerance = kDefaultNodeTolerance);

    Vec3 vector_potential(const Vec3& x) const;
    Vec3 electric_field(const Vec3& x) const;
    Vec3 magnetic_induction(const Vec3& x) const;
    Vec3 intensity(const Vec3& x) const;
    void evaluate(const Vec3& x, Vec3& a, Vec3& e, Vec3& b, Vec3& intensity) const;

  private:
    struct EntryData {
        Vec3 k;
        Vec3 eps;
        Vec3 k_cross_eps;
        Complex q;
        Complex pi;  // dS/dq, zero on background modes
    };
    std::vector<EntryData> entries_;
    double inv_sqrt_v_ = 0.0;
    double light_speed_ = 0.0;
};

// OpenMP-parallel over positions (each point writes its own slot, so results
// are identical for any thread count).
FieldSnapshot evaluate_beables(const PhotonState& state, const FieldConfiguration& config,
                               const std::vector<Vec3>& positions, const PhysicsConstants& physics,
                               double node_tolerance = kDefaultNodeTolerance);

// Serial reference: literal complex site sums for A, E, B and the literal
// double mode sum for the intensity.
FieldSnapshot evaluate_beables_serial(const PhotonState& state, const FieldConfiguration& config,
                                      const std::vector<Vec3>& positions,
                                      const PhysicsConstants& physics,
                                      double node_tolerance = kDefaultNodeTolerance);

// A and B need no phase gradient and stay defined at nodes.
Vec3 evaluate_vector_potential(const FieldConfiguration& config, const Vec3& x);
Vec3 evaluate_magnetic_induction(const FieldConfiguration& config, const Vec3& x);

// On-shell closed forms, all regions: with Theta_b = k_b.x - omega t - phase_b
// and shared polarization eps0,
//   A = (2/sqrt(V)) sum_b a_b cos(Theta_b) eps0 + u(x)/sqrt(V)
//   E = -(hbar c/(q0^2 sqrt(V))) sum_b a_b sin(Theta_b) eps0
//   B = -(2/sqrt(V)) sum_b a_b sin(Theta_b) (k_b x eps0) + v(x)/sqrt(V)
//   I = (2 hbar c^2/(q0^2 V)) (sum_b a_b sinTheta_b)(sum_b a_b k_b sinTheta_b)
//       - (hbar c^2/(q0^2 V)) (sum_b a_b sinTheta_b) (eps0 x v(x))
// with u, v the background-mode sums. Background coordinates come from
// `background`; the beams' entries are excluded from u and v.
void closed_form_beables(const RegionConstants& constants, const FieldConfiguration& background,
                         const PhysicsConstants& physics, const Vec3& x, double t, Vec3* a,
                         Vec3* e, Vec3* b, Vec3* intensity);

struct ClassicalRelationDefects {
    double electric = 0.0;  // max |(1/c) dA/dt + E|
    double magnetic = 0.0;  // max |curl A - B|
};

// Central finite differences: dA/dt across the trajectory's uniform time grid,
// curl A with spatial step h_space. Both defects are O(h^2).
ClassicalRelationDefects check_classical_relations(const PhotonState& state,
                                                   const Trajectory& trajectory,
                                                   const std::vector<Vec3>& points, double h_space,
                                                   const PhysicsConstants& physics);

struct BeamMomentum {
    std::string label;
    Vec3 momentum;                 // hbar |c_b|^2 k_b
    Vec3 cycle_average_intensity;  // (c^2/V) * momentum
};

struct BeamTotals {
    Vec3 momentum;                        // vector sum over beams
    double beam_momentum_sum = 0.0;       // sum_b |G_b| = hbar kappa0
    double energy = 0.0;                  // hbar c kappa0 + zero-point sum
    std::vector<BeamMomentum> beams;
};

BeamTotals beam_totals(const PhotonState& state, const RegionConstants& constants,
                       const PhysicsConstants& physics);

// (1/c^2) * volume integral of the intensity beable, rectangle rule over an
// n^3 grid (exact once n exceeds the largest lattice frequency difference).
// Parallel map over grid points with a serial deterministic reduction.
Vec3 momentum_volume_quadrature(const PhotonState& state, const FieldConfiguration& config,
                                std::size_t grid_n, const PhysicsConstants& physics);
Vec3 momentum_volume_quadrature_serial(const PhotonState& state, const FieldConfiguration& config,
                                       std::size_t grid_n, const PhysicsConstants& physics);

// Time average of the intensity beable at x over one nonclassical period
// T = 2 pi / omega (rectangle rule in time, exact for the trig polynomial).
Vec3 cycle_average_intensity(const PhotonState& state, const RegionConstants& constants,
                             const FieldConfiguration& background, const Vec3& x,
                             std::size_t time_samples, const PhysicsConstants& physics);

// Closed form of the cycle average, including the x-dependent standing-wave
// cross term between non-collinear beams:
//   (hbar c^2/(q0^2 V)) sum_b sum_b' a_b a_b' k_b' cos((k_b-k_b').x - (p_b-p_b')).
Vec3 cycle_average_intensity_closed(const RegionConstants& constants, const ModeSet& modes,
                                    const PhysicsConstants& physics, const Vec3& x);

// Box-plus-cycle average: the position-dependent terms integrate to zero over
// the periodic box leaving (hbar c^2/V) sum_b |c_b|^2 k_b.
Vec3 box_cycle_average_intensity(const PhotonState& state, const RegionConstants& constants,
                                 const FieldConfiguration& background, std::size_t grid_n,
                                 std::size_t time_samples, const PhysicsConstants& physics);
Vec3 box_cycle_average_intensity_serial(const PhotonState& state, const RegionConstants& constants,
                                        const FieldConfiguration& background, std::size_t grid_n,
                                        std::size_t time_samples,
                                        const PhysicsConstants& physics);
Vec3 box_cycle_average_closed(const RegionConstants& constants, const ModeSet& modes,
                              const PhysicsConstants& physics);

}  // namespace mzp
