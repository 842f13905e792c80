#pragma once

#include "vcc/fcidump.hpp"
#include "vcc/fock_space.hpp"
#include "vcc/operators.hpp"

namespace vcc {

struct GroundState {
  double energy = 0.0;   ///< total energy including the core energy
  StateVector vector;    ///< normalized, over `basis`
};

/// <ref|H|ref> including the core energy.
double hf_energy(const IntegralSet& set);

/// Lowest eigenpair of H in the reference's (N, Sz) sector. Dense
/// diagonalization up to 5000 determinants, Lanczos beyond.
GroundState fci_ground_state(const IntegralSet& set);
double fci_energy(const IntegralSet& set);

/// Variational CISD: H diagonalized in the span of the reference and all
/// (Sz-conserving) single and double excitations of it, keeping only states
/// with the reference's total spin. The Sz-only subspace can hold a lower
/// triplet root at stretched geometries.
GroundState cisd_ground_state(const IntegralSet& set);
double cisd_energy(const IntegralSet& set);

/// Determinants differing from `ref` by at most `max_rank` electron moves
/// within the same (N, Sz) sector, ascending.
DeterminantBasis excitation_subspace(const FockSpace& space, int max_rank);

}  // namespace vcc
