#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "vcc/fcidump.hpp"
#include "vcc/fock_space.hpp"

namespace vcc {

/// Real sparse matrix over a DeterminantBasis (row = bra, column = ket).
/// Every operator in this library has real matrix elements in the
/// Jordan-Wigner occupation basis, so a real scalar type is exact.
using SparseOperator = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class LadderKind { create, annihilate };

/// Jordan-Wigner ladder operator on the full 2^q space.
SparseOperator ladder_operator(const FockSpace& space, int p, LadderKind kind);

SparseOperator build_hamiltonian(const IntegralSet& set, const FockSpace& space);
/// Hamiltonian restricted to `basis`. With include_core = false the constant
/// core energy is left off the diagonal.
SparseOperator build_hamiltonian(const IntegralSet& set, const FockSpace& space,
                                 const DeterminantBasis& basis, bool include_core = true);

/// Particle-number and 2*Sz operators (diagonal) over a basis.
SparseOperator number_operator(const DeterminantBasis& basis);
SparseOperator sz2_operator(const DeterminantBasis& basis);
/// Total spin S^2 = S_- S_+ + S_z^2 + S_z restricted to the basis. Exact only on
/// bases closed under spin flips (sectors, excitation subspaces of a
/// closed-shell reference); couplings leaving the basis are dropped.
SparseOperator spin_squared_operator(const DeterminantBasis& basis);

/// One cluster-operator term: a+_a a_i (rank 1) or a+_a a+_b a_i a_j with
/// i < j and a < b (rank 2).
struct Excitation {
  int rank = 1;
  int i = -1, j = -1;
  int a = -1, b = -1;

  friend bool operator==(const Excitation&, const Excitation&) = default;
  std::string label() const;
};

/// Spin-conserving singles and doubles over the space's occupied/virtual
/// partition: singles first, then doubles, each in lexicographic order.
std::vector<Excitation> singles_and_doubles(const FockSpace& space);

/// Real cluster amplitudes paired with their excitation descriptors.
struct AmplitudeVector {
  std::vector<Excitation> excitations;
  Eigen::VectorXd values;

  static AmplitudeVector zeros(const FockSpace& space);
  std::size_t size() const { return excitations.size(); }
};

/// Checks descriptors against the occupied/virtual partition and uniqueness.
void validate_excitations(const std::vector<Excitation>& excitations, const FockSpace& space);

/// Precomputed action of each unweighted excitation on a basis: for term mu,
/// the list of (ket index, bra index, sign) with <bra| E_mu |ket> = sign.
class ExcitationTable {
 public:
  struct Entry {
    std::int32_t ket;
    std::int32_t bra;
    double sign;
  };

  ExcitationTable(const DeterminantBasis& basis, std::vector<Excitation> excitations);

  std::size_t n_terms() const { return excitations_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<Excitation>& excitations() const { return excitations_; }
  const std::vector<Entry>& entries(std::size_t mu) const { return entries_[mu]; }

  /// T = sum_mu t_mu E_mu.
  SparseOperator assemble(const Eigen::VectorXd& amplitudes) const;
  /// Unweighted single term E_mu.
  SparseOperator term(std::size_t mu) const;

 private:
  std::size_t dimension_;
  std::vector<Excitation> excitations_;
  std::vector<std::vector<Entry>> entries_;
};

/// Cluster operator on the full 2^q space.
SparseOperator build_cluster_operator(const AmplitudeVector& t, const FockSpace& space);
/// Cluster operator restricted to a basis (exact when the basis is a sector,
/// since T conserves N and Sz).
SparseOperator build_cluster_operator(const AmplitudeVector& t, const FockSpace& space,
                                      const DeterminantBasis& basis);

struct HermitianSplit {
  SparseOperator antihermitian;  ///< (T - T^dagger) / 2
  SparseOperator hermitian;      ///< (T + T^dagger) / 2
};

HermitianSplit split_hermitian(const SparseOperator& t);

}  // namespace vcc
