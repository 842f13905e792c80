#include "vcc/operators.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace vcc {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseOperator from_triplets(std::size_t rows, std::size_t cols,
                             const std::vector<Triplet>& triplets) {
  SparseOperator m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

std::vector<int> occupied_list(Determinant d) {
  std::vector<int> out;
  while (d) {
    out.push_back(std::countr_zero(d));
    d &= d - 1;
  }
  return out;
}

// Spin-orbital integrals from a spatial IntegralSet, stored densely.
class SpinOrbitalIntegrals {
 public:
  explicit SpinOrbitalIntegrals(const IntegralSet& set) : n_(set.n_orbitals()) {
    h_.assign(static_cast<std::size_t>(n_ * n_), 0.0);
    eri_.assign(static_cast<std::size_t>(n_ * n_ * n_ * n_), 0.0);
    for (int p = 1; p <= n_; ++p)
      for (int q = 1; q <= n_; ++q) h_[idx(p - 1, q - 1)] = set.one(p, q);
    for (int p = 1; p <= n_; ++p)
      for (int q = 1; q <= n_; ++q)
        for (int r = 1; r <= n_; ++r)
          for (int s = 1; s <= n_; ++s)
            eri_[idx(p - 1, q - 1, r - 1, s - 1)] = set.two(p, q, r, s);
  }

  double one(int p, int q) const {
    if ((p & 1) != (q & 1)) return 0.0;
    return h_[idx(p / 2, q / 2)];
  }

  // <pq|rs> = (pr|qs) with spin selection.
  double physicist(int p, int q, int r, int s) const {
    if ((p & 1) != (r & 1) || (q & 1) != (s & 1)) return 0.0;
    return eri_[idx(p / 2, r / 2, q / 2, s / 2)];
  }

  double antisymmetrized(int p, int q, int r, int s) const {
    return physicist(p, q, r, s) - physicist(p, q, s, r);
  }

 private:
  std::size_t idx(int p, int q) const { return static_cast<std::size_t>(p * n_ + q); }
  std::size_t idx(int p, int q, int r, int s) const {
    return static_cast<std::size_t>(((p * n_ + q) * n_ + r) * n_ + s);
  }

  int n_;
  std::vector<double> h_;
  std::vector<double> eri_;
};

}  // namespace

SparseOperator ladder_operator(const FockSpace& space, int p, LadderKind kind) {
  if (p < 0 || p >= space.n_spin_orbitals)
    throw std::out_of_range("spin orbital " + std::to_string(p) + " out of range");
  const std::size_t dim = space.dimension();
  const bool create = kind == LadderKind::create;
  std::vector<Triplet> triplets;
  triplets.reserve(dim / 2);
  for (Determinant d = 0; d < dim; ++d) {
    const auto r = apply_ladder_string(d, {{p, create}});
    if (r) triplets.emplace_back(static_cast<int>(r->det), static_cast<int>(d), r->sign);
  }
  return from_triplets(dim, dim, triplets);
}

SparseOperator build_hamiltonian(const IntegralSet& set, const FockSpace& space) {
  return build_hamiltonian(set, space, DeterminantBasis::full(space.n_spin_orbitals));
}

SparseOperator build_hamiltonian(const IntegralSet& set, const FockSpace& space,
                                 const DeterminantBasis& basis, bool include_core) {
  if (space.n_spin_orbitals != 2 * set.n_orbitals())
    throw std::invalid_argument("Fock space has " + std::to_string(space.n_spin_orbitals) +
                                " spin orbitals but the integrals describe " +
                                std::to_string(2 * set.n_orbitals()));
  if (basis.n_spin_orbitals() != space.n_spin_orbitals)
    throw std::invalid_argument("basis and Fock space dimensions differ");

  const SpinOrbitalIntegrals ints(set);
  const int q = space.n_spin_orbitals;
  const double core = include_core ? set.core_energy() : 0.0;
  std::vector<Triplet> triplets;

  for (std::size_t col = 0; col < basis.size(); ++col) {
    const Determinant det = basis[col];
    const auto occ = occupied_list(det);
    std::vector<int> vir;
    for (int p = 0; p < q; ++p)
      if (!(det >> p & 1)) vir.push_back(p);

    double diag = core;
    for (int i : occ) diag += ints.one(i, i);
    for (std::size_t x = 0; x < occ.size(); ++x)
      for (std::size_t y = x + 1; y < occ.size(); ++y)
        diag += ints.antisymmetrized(occ[x], occ[y], occ[x], occ[y]);
    triplets.emplace_back(static_cast<int>(col), static_cast<int>(col), diag);

    auto push = [&](Determinant target, int sign, double value) {
      if (value == 0.0) return;
      const auto row = basis.index_of(target);
      if (!row) return;
      triplets.emplace_back(static_cast<int>(*row), static_cast<int>(col), sign * value);
    };

    for (int i : occ) {
      for (int a : vir) {
        if ((i & 1) != (a & 1)) continue;
        double value = ints.one(a, i);
        for (int j : occ) value += ints.antisymmetrized(a, j, i, j);
        const auto r = apply_ladder_string(det, {{a, true}, {i, false}});
        push(r->det, r->sign, value);
      }
    }
    for (std::size_t x = 0; x < occ.size(); ++x) {
      for (std::size_t y = x + 1; y < occ.size(); ++y) {
        const int i = occ[x], j = occ[y];
        for (std::size_t u = 0; u < vir.size(); ++u) {
          for (std::size_t w = u + 1; w < vir.size(); ++w) {
            const int a = vir[u], b = vir[w];
            const double value = ints.antisymmetrized(a, b, i, j);
            if (value == 0.0) continue;
            const auto r = apply_ladder_string(det, {{a, true}, {b, true}, {j, false}, {i, false}});
            push(r->det, r->sign, value);
          }
        }
      }
    }
  }
  return from_triplets(basis.size(), basis.size(), triplets);
}

SparseOperator number_operator(const DeterminantBasis& basis) {
  std::vector<Triplet> triplets;
  for (std::size_t i = 0; i < basis.size(); ++i)
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), popcount(basis[i]));
  return from_triplets(basis.size(), basis.size(), triplets);
}

SparseOperator sz2_operator(const DeterminantBasis& basis) {
  std::vector<Triplet> triplets;
  for (std::size_t i = 0; i < basis.size(); ++i)
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i),
                          alpha_count(basis[i]) - beta_count(basis[i]));
  return from_triplets(basis.size(), basis.size(), triplets);
}

SparseOperator spin_squared_operator(const DeterminantBasis& basis) {
  const int n_spatial = basis.n_spin_orbitals() / 2;
  std::vector<Triplet> triplets;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Determinant d = basis[i];
    const double sz = 0.5 * (alpha_count(d) - beta_count(d));
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), sz * sz + sz);
    for (int p = 1; p <= n_spatial; ++p) {
      for (int q = 1; q <= n_spatial; ++q) {
        const auto r = apply_ladder_string(d, {{spin_orbital(q, 1), true},
                                               {spin_orbital(q, 0), false},
                                               {spin_orbital(p, 0), true},
                                               {spin_orbital(p, 1), false}});
        if (!r) continue;
        const auto j = basis.index_of(r->det);
        if (!j) continue;
        triplets.emplace_back(static_cast<int>(*j), static_cast<int>(i), r->sign);
      }
    }
  }
  return from_triplets(basis.size(), basis.size(), triplets);
}

std::string Excitation::label() const {
  std::ostringstream out;
  if (rank == 1)
    out << i << "->" << a;
  else
    out << i << "," << j << "->" << a << "," << b;
  return out.str();
}

std::vector<Excitation> singles_and_doubles(const FockSpace& space) {
  std::vector<Excitation> out;
  const auto& occ = space.occupied;
  const auto& vir = space.virtuals;
  for (int i : occ)
    for (int a : vir)
      if ((i & 1) == (a & 1)) out.push_back({1, i, -1, a, -1});
  for (std::size_t x = 0; x < occ.size(); ++x)
    for (std::size_t y = x + 1; y < occ.size(); ++y)
      for (std::size_t u = 0; u < vir.size(); ++u)
        for (std::size_t w = u + 1; w < vir.size(); ++w) {
          const int i = occ[x], j = occ[y], a = vir[u], b = vir[w];
          if ((i & 1) + (j & 1) != (a & 1) + (b & 1)) continue;
          out.push_back({2, i, j, a, b});
        }
  return out;
}

AmplitudeVector AmplitudeVector::zeros(const FockSpace& space) {
  AmplitudeVector t;
  t.excitations = singles_and_doubles(space);
  t.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(t.excitations.size()));
  return t;
}

void validate_excitations(const std::vector<Excitation>& excitations, const FockSpace& space) {
  auto is_occ = [&](int p) {
    return p >= 0 && p < space.n_spin_orbitals && (space.reference >> p & 1);
  };
  auto is_vir = [&](int p) {
    return p >= 0 && p < space.n_spin_orbitals && !(space.reference >> p & 1);
  };
  std::set<std::tuple<int, int, int, int, int>> seen;
  for (const auto& e : excitations) {
    if (e.rank == 1) {
      if (!is_occ(e.i)) throw std::invalid_argument("excitation " + e.label() + ": i not occupied");
      if (!is_vir(e.a)) throw std::invalid_argument("excitation " + e.label() + ": a not virtual");
    } else if (e.rank == 2) {
      if (!is_occ(e.i) || !is_occ(e.j))
        throw std::invalid_argument("excitation " + e.label() + ": i/j not occupied");
      if (!is_vir(e.a) || !is_vir(e.b))
        throw std::invalid_argument("excitation " + e.label() + ": a/b not virtual");
      if (!(e.i < e.j) || !(e.a < e.b))
        throw std::invalid_argument("excitation " + e.label() + ": indices not ordered");
    } else {
      throw std::invalid_argument("excitation rank must be 1 or 2");
    }
    if (!seen.emplace(e.rank, e.i, e.j, e.a, e.b).second)
      throw std::invalid_argument("duplicate excitation " + e.label());
  }
}

ExcitationTable::ExcitationTable(const DeterminantBasis& basis,
                                 std::vector<Excitation> excitations)
    : dimension_(basis.size()), excitations_(std::move(excitations)) {
  entries_.resize(excitations_.size());
  for (std::size_t mu = 0; mu < excitations_.size(); ++mu) {
    const auto& e = excitations_[mu];
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const Determinant d = basis[k];
      const auto r = e.rank == 1
                         ? apply_ladder_string(d, {{e.a, true}, {e.i, false}})
                         : apply_ladder_string(d, {{e.a, true}, {e.b, true}, {e.i, false}, {e.j, false}});
      if (!r) continue;
      const auto bra = basis.index_of(r->det);
      if (!bra) continue;
      entries_[mu].push_back({static_cast<std::int32_t>(k), static_cast<std::int32_t>(*bra),
                              static_cast<double>(r->sign)});
    }
  }
}

SparseOperator ExcitationTable::assemble(const Eigen::VectorXd& amplitudes) const {
  if (static_cast<std::size_t>(amplitudes.size()) != excitations_.size())
    throw std::invalid_argument("amplitude count does not match excitation table");
  std::vector<Triplet> triplets;
  for (std::size_t mu = 0; mu < entries_.size(); ++mu) {
    const double t = amplitudes[static_cast<Eigen::Index>(mu)];
    if (t == 0.0) continue;
    for (const auto& e : entries_[mu]) triplets.emplace_back(e.bra, e.ket, t * e.sign);
  }
  return from_triplets(dimension_, dimension_, triplets);
}

SparseOperator ExcitationTable::term(std::size_t mu) const {
  std::vector<Triplet> triplets;
  for (const auto& e : entries_.at(mu)) triplets.emplace_back(e.bra, e.ket, e.sign);
  return from_triplets(dimension_, dimension_, triplets);
}

SparseOperator build_cluster_operator(const AmplitudeVector& t, const FockSpace& space) {
  return build_cluster_operator(t, space, DeterminantBasis::full(space.n_spin_orbitals));
}

SparseOperator build_cluster_operator(const AmplitudeVector& t, const FockSpace& space,
                                      const DeterminantBasis& basis) {
  if (static_cast<std::size_t>(t.values.size()) != t.excitations.size())
    throw std::invalid_argument("amplitude values and descriptors differ in length");
  validate_excitations(t.excitations, space);
  return ExcitationTable(basis, t.excitations).assemble(t.values);
}

HermitianSplit split_hermitian(const SparseOperator& t) {
  const SparseOperator adj = t.adjoint();
  HermitianSplit out;
  out.antihermitian = 0.5 * (t - adj);
  out.hermitian = 0.5 * (t + adj);
  out.antihermitian.prune(0.0);
  out.hermitian.prune(0.0);
  return out;
}

}  // namespace vcc
