#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "vcc/fcidump.hpp"

namespace vcc {

/// Occupation bit string; bit p is spin orbital p (and Jordan-Wigner qubit p).
using Determinant = std::uint64_t;
using StateVector = Eigen::VectorXd;

/// Spin orbital p = 2 * (spatial - 1) + sigma with sigma 0 for alpha, 1 for beta.
constexpr int spin_orbital(int spatial_one_based, int sigma) {
  return 2 * (spatial_one_based - 1) + sigma;
}

/// Interleaved Jordan-Wigner Fock space with a closed- or open-shell
/// Hartree-Fock reference built from the lowest spin orbitals of each spin.
struct FockSpace {
  int n_spin_orbitals = 0;
  int n_electrons = 0;
  int ms2 = 0;
  std::vector<int> occupied;
  std::vector<int> virtuals;
  Determinant reference = 0;

  static FockSpace make(int n_spin_orbitals, int n_electrons, int ms2 = 0);
  static FockSpace from_integrals(const IntegralSet& set);

  std::size_t dimension() const { return std::size_t{1} << n_spin_orbitals; }
  int n_alpha() const { return (n_electrons + ms2) / 2; }
  int n_beta() const { return (n_electrons - ms2) / 2; }
};

/// Result of applying a string of ladder operators to a determinant.
struct LadderResult {
  Determinant det;
  int sign;
};

/// Applies `ops` right-to-left (the last entry acts first). Each entry is
/// (spin orbital, creation?). Returns nullopt when the product annihilates det.
std::optional<LadderResult> apply_ladder_string(
    Determinant det, std::initializer_list<std::pair<int, bool>> ops);

/// Ordered list of determinants spanning a subspace of the Fock space, with
/// reverse lookup. Either the full 2^q space or one (N, Sz) sector.
class DeterminantBasis {
 public:
  static DeterminantBasis full(int n_spin_orbitals);
  static DeterminantBasis sector(int n_spin_orbitals, int n_alpha, int n_beta);
  static DeterminantBasis sector(const FockSpace& space) {
    return sector(space.n_spin_orbitals, space.n_alpha(), space.n_beta());
  }
  /// Arbitrary subspace; determinants must be distinct and below 2^q.
  static DeterminantBasis subset(int n_spin_orbitals, std::vector<Determinant> dets);

  std::size_t size() const { return dets_.size(); }
  Determinant operator[](std::size_t i) const { return dets_[i]; }
  const std::vector<Determinant>& determinants() const { return dets_; }
  int n_spin_orbitals() const { return n_spin_orbitals_; }
  bool is_full() const { return full_; }

  std::optional<std::size_t> index_of(Determinant d) const {
    if (d >= lookup_.size()) return std::nullopt;
    const auto i = lookup_[d];
    if (i < 0) return std::nullopt;
    return static_cast<std::size_t>(i);
  }

  /// Unit vector on determinant d; throws if d is outside the basis.
  StateVector unit(Determinant d) const;

  /// Scatters a vector over this basis into the full 2^q space.
  StateVector embed(const StateVector& v) const;
  /// Gathers the components of a full-space vector that lie in this basis.
  StateVector restrict(const StateVector& full_vector) const;

 private:
  DeterminantBasis(int q, std::vector<Determinant> dets, bool full);

  int n_spin_orbitals_ = 0;
  bool full_ = false;
  std::vector<Determinant> dets_;
  std::vector<std::int32_t> lookup_;
};

int popcount(Determinant d);
int alpha_count(Determinant d);
int beta_count(Determinant d);

}  // namespace vcc
