#include "vcc/reference.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "vcc/linalg.hpp"

namespace vcc {

namespace {

GroundState lowest(const IntegralSet& set, const FockSpace& space, const DeterminantBasis& basis) {
  const SparseOperator h = build_hamiltonian(set, space, basis, false);
  GroundState gs;
  if (basis.size() <= 5000) {
    const Eigen::MatrixXd dense(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    gs.energy = es.eigenvalues()[0];
    gs.vector = es.eigenvectors().col(0);
  } else {
    auto pair = lanczos_lowest(h);
    gs.energy = pair.value;
    gs.vector = std::move(pair.vector);
  }
  gs.energy += set.core_energy();
  return gs;
}

// Lowest eigenpair of H inside the S^2 = S(S+1) eigenspace of the basis,
// with S = |ms2| / 2 taken from the reference.
GroundState lowest_with_spin(const IntegralSet& set, const FockSpace& space,
                             const DeterminantBasis& basis) {
  const double s = 0.5 * std::abs(space.ms2);
  const Eigen::MatrixXd s2(spin_squared_operator(basis));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spin(s2);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < spin.eigenvalues().size(); ++k)
    if (std::abs(spin.eigenvalues()[k] - s * (s + 1.0)) < 1e-8) keep.push_back(k);
  if (keep.empty()) throw std::runtime_error("no states with the reference spin in the subspace");
  Eigen::MatrixXd v(basis.size(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = spin.eigenvectors().col(keep[c]);

  const Eigen::MatrixXd h(build_hamiltonian(set, space, basis, false));
  const Eigen::MatrixXd projected = v.transpose() * h * v;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(projected);
  GroundState gs;
  gs.energy = es.eigenvalues()[0] + set.core_energy();
  gs.vector = v * es.eigenvectors().col(0);
  gs.vector.normalize();
  return gs;
}

}  // namespace

double hf_energy(const IntegralSet& set) {
  const FockSpace space = FockSpace::from_integrals(set);
  const auto basis = DeterminantBasis::subset(space.n_spin_orbitals, {space.reference});
  return Eigen::MatrixXd(build_hamiltonian(set, space, basis, true))(0, 0);
}

GroundState fci_ground_state(const IntegralSet& set) {
  const FockSpace space = FockSpace::from_integrals(set);
  return lowest(set, space, DeterminantBasis::sector(space));
}

double fci_energy(const IntegralSet& set) { return fci_ground_state(set).energy; }

DeterminantBasis excitation_subspace(const FockSpace& space, int max_rank) {
  const DeterminantBasis sector = DeterminantBasis::sector(space);
  std::vector<Determinant> dets;
  for (Determinant d : sector.determinants())
    if (popcount(d & ~space.reference) <= max_rank) dets.push_back(d);
  return DeterminantBasis::subset(space.n_spin_orbitals, std::move(dets));
}

GroundState cisd_ground_state(const IntegralSet& set) {
  const FockSpace space = FockSpace::from_integrals(set);
  return lowest_with_spin(set, space, excitation_subspace(space, 2));
}

double cisd_energy(const IntegralSet& set) { return cisd_ground_state(set).energy; }

}  // namespace vcc
