#pragma once

#include "mzp/core.hpp"
#include "mzp/photon_state.hpp"

namespace mzp {

// Two inequivalent operator orderings of the Poynting intensity. On one-photon
// states their expectation values coincide; the normal-ordered form is not
// Hermitian term-by-term, so its expectation is taken as the Hermitian part.
enum class IntensityOperatorKind { Symmetrized, NormalOrdered };

// <state| I(x) |state> assembled from explicit ladder-operator matrix elements
// over the full +-site lattice (one-photon sector plus vacuum). The vacuum
// (zero-point) diagonal of the symmetrized form is summed explicitly and
// cancels by lattice symmetry.
Vec3 intensity_operator_expectation(const PhotonState& state, const Vec3& x,
                                    IntensityOperatorKind kind, const PhysicsConstants& physics);

// Largest imaginary residue encountered while assembling the expectation;
// exposed for reality checks.
Vec3 intensity_operator_expectation(const PhotonState& state, const Vec3& x,
                                    IntensityOperatorKind kind, const PhysicsConstants& physics,
                                    double* max_imaginary_residue);

}  // namespace mzp
