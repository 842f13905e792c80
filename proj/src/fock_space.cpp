#include "vcc/fock_space.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace vcc {

namespace {
constexpr Determinant kAlphaMask = 0x5555555555555555ULL;
constexpr int kMaxSpinOrbitals = 26;
}  // namespace

int popcount(Determinant d) { return std::popcount(d); }
int alpha_count(Determinant d) { return std::popcount(d & kAlphaMask); }
int beta_count(Determinant d) { return std::popcount(d & ~kAlphaMask); }

FockSpace FockSpace::make(int n_spin_orbitals, int n_electrons, int ms2) {
  if (n_spin_orbitals < 1 || n_spin_orbitals > kMaxSpinOrbitals || n_spin_orbitals % 2)
    throw std::invalid_argument("spin orbital count must be even and in [2, " +
                                std::to_string(kMaxSpinOrbitals) + "]");
  if (n_electrons < 0 || n_electrons > n_spin_orbitals)
    throw std::invalid_argument("electron count out of range");
  if ((n_electrons + ms2) % 2 != 0 || std::abs(ms2) > n_electrons)
    throw std::invalid_argument("ms2 inconsistent with electron count");

  FockSpace space;
  space.n_spin_orbitals = n_spin_orbitals;
  space.n_electrons = n_electrons;
  space.ms2 = ms2;
  const int n_spatial = n_spin_orbitals / 2;
  if (space.n_alpha() > n_spatial || space.n_beta() > n_spatial)
    throw std::invalid_argument("too many electrons of one spin");
  for (int p = 0; p < n_spin_orbitals; ++p) {
    const int level = p / 2;
    const bool occ = (p % 2 == 0) ? level < space.n_alpha() : level < space.n_beta();
    if (occ) {
      space.occupied.push_back(p);
      space.reference |= Determinant{1} << p;
    } else {
      space.virtuals.push_back(p);
    }
  }
  return space;
}

FockSpace FockSpace::from_integrals(const IntegralSet& set) {
  return make(2 * set.n_orbitals(), set.n_electrons(), set.ms2());
}

std::optional<LadderResult> apply_ladder_string(
    Determinant det, std::initializer_list<std::pair<int, bool>> ops) {
  int sign = 1;
  for (auto it = std::rbegin(ops); it != std::rend(ops); ++it) {
    const auto [p, create] = *it;
    const Determinant bit = Determinant{1} << p;
    const bool occupied = det & bit;
    if (occupied == create) return std::nullopt;
    if (std::popcount(det & (bit - 1)) & 1) sign = -sign;
    det ^= bit;
  }
  return LadderResult{det, sign};
}

DeterminantBasis::DeterminantBasis(int q, std::vector<Determinant> dets, bool full)
    : n_spin_orbitals_(q), full_(full), dets_(std::move(dets)) {
  lookup_.assign(std::size_t{1} << q, -1);
  for (std::size_t i = 0; i < dets_.size(); ++i)
    lookup_[dets_[i]] = static_cast<std::int32_t>(i);
}

DeterminantBasis DeterminantBasis::full(int n_spin_orbitals) {
  if (n_spin_orbitals < 1 || n_spin_orbitals > kMaxSpinOrbitals)
    throw std::invalid_argument("spin orbital count out of range");
  std::vector<Determinant> dets(std::size_t{1} << n_spin_orbitals);
  for (std::size_t i = 0; i < dets.size(); ++i) dets[i] = i;
  return DeterminantBasis(n_spin_orbitals, std::move(dets), true);
}

DeterminantBasis DeterminantBasis::sector(int n_spin_orbitals, int n_alpha, int n_beta) {
  if (n_spin_orbitals < 1 || n_spin_orbitals > kMaxSpinOrbitals)
    throw std::invalid_argument("spin orbital count out of range");
  std::vector<Determinant> dets;
  const Determinant end = Determinant{1} << n_spin_orbitals;
  for (Determinant d = 0; d < end; ++d)
    if (alpha_count(d) == n_alpha && beta_count(d) == n_beta) dets.push_back(d);
  return DeterminantBasis(n_spin_orbitals, std::move(dets), false);
}

DeterminantBasis DeterminantBasis::subset(int n_spin_orbitals, std::vector<Determinant> dets) {
  if (n_spin_orbitals < 1 || n_spin_orbitals > kMaxSpinOrbitals)
    throw std::invalid_argument("spin orbital count out of range");
  std::vector<bool> seen(std::size_t{1} << n_spin_orbitals, false);
  for (Determinant d : dets) {
    if (d >= seen.size() || seen[d]) throw std::invalid_argument("invalid determinant list");
    seen[d] = true;
  }
  return DeterminantBasis(n_spin_orbitals, std::move(dets), false);
}

StateVector DeterminantBasis::unit(Determinant d) const {
  const auto i = index_of(d);
  if (!i) throw std::out_of_range("determinant outside basis");
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(size()));
  v[static_cast<Eigen::Index>(*i)] = 1.0;
  return v;
}

StateVector DeterminantBasis::embed(const StateVector& v) const {
  if (static_cast<std::size_t>(v.size()) != size())
    throw std::invalid_argument("vector size does not match basis");
  StateVector out = StateVector::Zero(static_cast<Eigen::Index>(lookup_.size()));
  for (std::size_t i = 0; i < dets_.size(); ++i)
    out[static_cast<Eigen::Index>(dets_[i])] = v[static_cast<Eigen::Index>(i)];
  return out;
}

StateVector DeterminantBasis::restrict(const StateVector& full_vector) const {
  if (static_cast<std::size_t>(full_vector.size()) != lookup_.size())
    throw std::invalid_argument("vector is not a full Fock-space vector");
  StateVector out(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < dets_.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = full_vector[static_cast<Eigen::Index>(dets_[i])];
  return out;
}

}  // namespace vcc
