#include "vcc/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vcc/linalg.hpp"
#include "vcc/qsvt.hpp"

namespace vcc {

namespace {

const std::vector<std::pair<Method, std::string>>& method_names() {
  static const std::vector<std::pair<Method, std::string>> names = {
      {Method::hf, "hf"},         {Method::exact_vcc, "exact-vcc"},
      {Method::cvcc, "cvcc"},     {Method::trotter_vcc, "trotter"},
      {Method::ducc, "ducc"},     {Method::hcvcc, "hcvcc"},
      {Method::hcvcc_circuit, "hcvcc-circuit"}};
  return names;
}

// sum_k T^k / k! v; T raises the excitation level so the series terminates.
StateVector terminating_exp(const SparseOperator& t, const StateVector& v, int max_terms) {
  StateVector sum = v;
  StateVector term = v;
  for (int k = 1; k <= max_terms; ++k) {
    term = (t * term) / static_cast<double>(k);
    if (term.cwiseAbs().maxCoeff() == 0.0) break;
    sum += term;
  }
  return sum;
}

// In-place exp(theta (E - E^dagger)) for one excitation; kets and bras of a
// single excitation are disjoint, so each (ket, bra) pair is a plane rotation.
void rotate_term(const ExcitationTable& table, std::size_t mu, double theta, StateVector& v) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (const auto& e : table.entries(mu)) {
    const double vk = v[e.ket];
    const double vb = v[e.bra];
    v[e.ket] = c * vk - e.sign * s * vb;
    v[e.bra] = c * vb + e.sign * s * vk;
  }
}

}  // namespace

std::string to_string(Method m) {
  for (const auto& [k, v] : method_names())
    if (k == m) return v;
  return "?";
}

Method method_from_string(const std::string& name) {
  for (const auto& [k, v] : method_names())
    if (v == name) return k;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string to_string(UccMode m) {
  return m == UccMode::exact_exponential ? "exact" : "disentangled";
}

UccMode ucc_mode_from_string(const std::string& name) {
  if (name == "exact") return UccMode::exact_exponential;
  if (name == "disentangled") return UccMode::disentangled_product;
  throw std::invalid_argument("unknown ucc mode '" + name + "'");
}

std::string to_string(CombineMode m) { return m == CombineMode::per_term ? "per-term" : "even-odd"; }

CombineMode combine_mode_from_string(const std::string& name) {
  if (name == "per-term") return CombineMode::per_term;
  if (name == "even-odd") return CombineMode::even_odd;
  throw std::invalid_argument("unknown combine mode '" + name + "'");
}

void AnsatzSpec::validate(std::size_t n_terms) const {
  if (needs_degree(method)) {
    if (!degree) throw std::invalid_argument(to_string(method) + " requires a degree");
    if (*degree < 0) throw std::invalid_argument("degree must be >= 0");
  } else if (degree) {
    throw std::invalid_argument(to_string(method) + " takes no degree");
  }
  if (!term_ordering.empty()) {
    std::vector<std::size_t> sorted = term_ordering;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted[i] != i || sorted.size() != n_terms)
        throw std::invalid_argument("term ordering is not a permutation of the excitations");
  }
}

std::string AnsatzSpec::label() const {
  std::string s = to_string(method);
  if (degree) s += "(d=" + std::to_string(*degree) + ")";
  return s;
}

VccSystem::VccSystem(const IntegralSet& set, SystemOptions options)
    : set_(set),
      options_(options),
      space_(FockSpace::from_integrals(set)),
      basis_(options.sector_basis ? DeterminantBasis::sector(space_)
                                  : DeterminantBasis::full(space_.n_spin_orbitals)),
      hamiltonian_(build_hamiltonian(set, space_, basis_, false)),
      table_(basis_, singles_and_doubles(space_)) {
  reference_index_ = *basis_.index_of(space_.reference);
}

StateVector VccSystem::reference() const { return basis_.unit(space_.reference); }

void VccSystem::check_amplitudes(const Eigen::VectorXd& t) const {
  if (static_cast<std::size_t>(t.size()) != n_parameters())
    throw std::invalid_argument("expected " + std::to_string(n_parameters()) +
                                " amplitudes, got " + std::to_string(t.size()));
  if (!t.allFinite()) throw std::invalid_argument("amplitudes must be finite");
}

AmplitudeVector VccSystem::amplitudes(const Eigen::VectorXd& t) const {
  check_amplitudes(t);
  return {excitations(), t};
}

double VccSystem::normalization(const SparseOperator& op, const Eigen::VectorXd& t) const {
  if (options_.norm == NormKind::amplitude_2norm) return t.norm();
  return spectral_norm(op);
}

double VccSystem::energy(const StateVector& psi) const {
  return energy_rayleigh(psi, hamiltonian_).energy + core_energy();
}

StateVector state_exact_vcc(const VccSystem& sys, const Eigen::VectorXd& t) {
  sys.check_amplitudes(t);
  return terminating_exp(sys.cluster(t), sys.reference(), sys.space().n_spin_orbitals + 1);
}

StateVector state_cvcc(const VccSystem& sys, const Eigen::VectorXd& t, int degree) {
  sys.check_amplitudes(t);
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  const SparseOperator tc = sys.cluster(t);
  const double tau = sys.normalization(tc, t);
  if (tau == 0.0) return sys.reference();
  const auto coeffs = cheb_coeffs_exp(tau, degree);
  const SparseOperator scaled = tc / tau;
  return apply_cheb_series(scaled, coeffs, sys.reference());
}

StateVector apply_anti_hermitian_factor(const VccSystem& sys, const Eigen::VectorXd& t,
                                        UccMode mode, const std::vector<std::size_t>& ordering,
                                        const StateVector& psi) {
  sys.check_amplitudes(t);
  if (mode == UccMode::exact_exponential) {
    const SparseOperator tc = sys.cluster(t);
    const SparseOperator k = 0.5 * (tc - SparseOperator(tc.transpose()));
    return expm_action(k, psi);
  }
  std::vector<std::size_t> order = ordering;
  if (order.empty()) {
    order.resize(sys.n_parameters());
    std::iota(order.begin(), order.end(), std::size_t{0});
  } else if (order.size() != sys.n_parameters()) {
    throw std::invalid_argument("term ordering must cover every excitation");
  }
  StateVector v = psi;
  for (std::size_t mu : order) {
    const double theta = 0.5 * t[static_cast<Eigen::Index>(mu)];
    if (theta != 0.0) rotate_term(sys.table(), mu, theta, v);
  }
  return v;
}

StateVector state_anti_hermitian_exp(const VccSystem& sys, const Eigen::VectorXd& t,
                                     UccMode mode, const std::vector<std::size_t>& ordering) {
  return apply_anti_hermitian_factor(sys, t, mode, ordering, sys.reference());
}

StateVector state_trotter_vcc(const VccSystem& sys, const Eigen::VectorXd& t, UccMode mode,
                              const std::vector<std::size_t>& ordering) {
  sys.check_amplitudes(t);
  const SparseOperator tc = sys.cluster(t);
  const SparseOperator herm = 0.5 * (tc + SparseOperator(tc.transpose()));
  const StateVector half = expm_action(herm, sys.reference());
  return apply_anti_hermitian_factor(sys, t, mode, ordering, half);
}

StateVector state_hcvcc(const VccSystem& sys, const Eigen::VectorXd& t, int degree,
                        UccMode mode, const std::vector<std::size_t>& ordering,
                        std::optional<double> scale) {
  sys.check_amplitudes(t);
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  const SparseOperator tc = sys.cluster(t);
  const SparseOperator herm = 0.5 * (tc + SparseOperator(tc.transpose()));
  const double kappa = scale ? *scale : sys.normalization(herm, t);
  if (kappa < 0.0 || !std::isfinite(kappa)) throw std::invalid_argument("invalid scale");
  StateVector v = sys.reference();
  if (kappa > 0.0) {
    const auto coeffs = cheb_coeffs_exp(kappa, degree);
    const SparseOperator scaled = herm / kappa;
    v = apply_cheb_series(scaled, coeffs, v);
  }
  return apply_anti_hermitian_factor(sys, t, mode, ordering, v);
}

StateVector prepare_state(const VccSystem& sys, const AnsatzSpec& spec, const Eigen::VectorXd& t) {
  spec.validate(sys.n_parameters());
  switch (spec.method) {
    case Method::hf:
      return sys.reference();
    case Method::exact_vcc:
      return state_exact_vcc(sys, t);
    case Method::cvcc:
      return state_cvcc(sys, t, *spec.degree);
    case Method::trotter_vcc:
      return state_trotter_vcc(sys, t, spec.ucc_mode, spec.term_ordering);
    case Method::ducc:
      return state_anti_hermitian_exp(sys, t, UccMode::disentangled_product, spec.term_ordering);
    case Method::hcvcc:
      return state_hcvcc(sys, t, *spec.degree, spec.ucc_mode, spec.term_ordering);
    case Method::hcvcc_circuit: {
      const auto circuit = assemble_hcvcc_circuit(sys, t, *spec.degree, spec.combine_mode,
                                                  spec.ucc_mode, spec.term_ordering);
      return circuit.state;
    }
  }
  throw std::logic_error("unhandled method");
}

namespace {

template <typename Vec>
EnergyReport rayleigh_impl(const Vec& psi, const SparseOperator& h) {
  if (h.cols() != psi.size()) throw std::invalid_argument("energy_rayleigh: dimension mismatch");
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 1e-14))
    throw NormCollapse("ansatz state norm^2 = " + std::to_string(norm2) + " (collapsed)");
  const Vec hpsi = h * psi;
  const auto num = psi.dot(hpsi);  // conjugate-linear in the first argument
  const double energy = std::real(num) / norm2;
  const double imag = std::imag(num) / norm2;
  if (std::abs(imag) > 1e-10 * std::max(1.0, std::abs(energy)))
    throw std::runtime_error("Rayleigh quotient has imaginary part " + std::to_string(imag));
  EnergyReport r;
  r.energy = energy;
  r.norm_squared = norm2;
  return r;
}

}  // namespace

EnergyReport energy_rayleigh(const StateVector& psi, const SparseOperator& h) {
  return rayleigh_impl(psi, h);
}

EnergyReport energy_rayleigh(const Eigen::VectorXcd& psi, const SparseOperator& h) {
  const Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor> hc =
      h.cast<std::complex<double>>();
  if (hc.cols() != psi.size()) throw std::invalid_argument("energy_rayleigh: dimension mismatch");
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 1e-14))
    throw NormCollapse("ansatz state norm^2 = " + std::to_string(norm2) + " (collapsed)");
  const Eigen::VectorXcd hpsi = hc * psi;
  const std::complex<double> num = psi.dot(hpsi);
  const double energy = num.real() / norm2;
  if (std::abs(num.imag() / norm2) > 1e-10 * std::max(1.0, std::abs(energy)))
    throw std::runtime_error("Rayleigh quotient has a non-negligible imaginary part");
  EnergyReport r;
  r.energy = energy;
  r.norm_squared = norm2;
  return r;
}

EnergyReport evaluate_energy(const VccSystem& sys, const AnsatzSpec& spec,
                             const Eigen::VectorXd& t) {
  EnergyReport r = energy_rayleigh(prepare_state(sys, spec, t), sys.hamiltonian());
  r.energy += sys.core_energy();
  r.method = spec;
  r.amplitudes = sys.amplitudes(t);
  return r;
}

double energy_projective_cc(const VccSystem& sys, const Eigen::VectorXd& t) {
  sys.check_amplitudes(t);
  const SparseOperator tc = sys.cluster(t);
  const int terms = sys.space().n_spin_orbitals + 1;
  const StateVector ket = terminating_exp(tc, sys.reference(), terms);
  // <ref| e^{-T} = (e^{-T^dagger} |ref>)^dagger
  const SparseOperator minus_adj = -SparseOperator(tc.transpose());
  const StateVector bra = terminating_exp(minus_adj, sys.reference(), terms);
  return bra.dot(sys.hamiltonian() * ket) + sys.core_energy() * bra.dot(ket);
}

}  // namespace vcc
