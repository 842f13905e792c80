#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vcc/chebyshev.hpp"
#include "vcc/fcidump.hpp"
#include "vcc/operators.hpp"

namespace vcc {

enum class Method { hf, exact_vcc, cvcc, trotter_vcc, ducc, hcvcc, hcvcc_circuit };
enum class UccMode { exact_exponential, disentangled_product };
enum class CombineMode { per_term, even_odd };

/// How the cluster operator is scaled into the Chebyshev domain.
enum class NormKind { spectral, amplitude_2norm };

std::string to_string(Method m);
Method method_from_string(const std::string& name);
std::string to_string(UccMode m);
UccMode ucc_mode_from_string(const std::string& name);
std::string to_string(CombineMode m);
CombineMode combine_mode_from_string(const std::string& name);

struct AnsatzSpec {
  Method method = Method::hf;
  std::optional<int> degree;  ///< required by cvcc / hcvcc / hcvcc_circuit only
  UccMode ucc_mode = UccMode::exact_exponential;
  /// Order in which disentangled factors act on the reference (first entry
  /// acts first). Empty means ascending excitation order.
  std::vector<std::size_t> term_ordering;
  CombineMode combine_mode = CombineMode::per_term;

  static bool needs_degree(Method m) {
    return m == Method::cvcc || m == Method::hcvcc || m == Method::hcvcc_circuit;
  }
  /// Throws std::invalid_argument for inconsistent fields.
  void validate(std::size_t n_terms) const;
  std::string label() const;
};

struct SystemOptions {
  /// Work in the reference's (N, Sz) sector instead of the full 2^q space.
  /// Every ansatz state stays in that sector, so results differ only through
  /// the domain over which the normalization constant is measured.
  bool sector_basis = true;
  NormKind norm = NormKind::spectral;
};

/// Everything needed to evaluate ansatz states for one molecule: basis,
/// electronic Hamiltonian (core energy kept separate), excitation table.
/// Immutable after construction.
class VccSystem {
 public:
  explicit VccSystem(const IntegralSet& set, SystemOptions options = {});

  const IntegralSet& integrals() const { return set_; }
  const FockSpace& space() const { return space_; }
  const DeterminantBasis& basis() const { return basis_; }
  const SystemOptions& options() const { return options_; }
  /// Electronic Hamiltonian without the core energy.
  const SparseOperator& hamiltonian() const { return hamiltonian_; }
  double core_energy() const { return set_.core_energy(); }
  const ExcitationTable& table() const { return table_; }
  const std::vector<Excitation>& excitations() const { return table_.excitations(); }
  std::size_t n_parameters() const { return table_.n_terms(); }
  std::size_t reference_index() const { return reference_index_; }
  StateVector reference() const;

  SparseOperator cluster(const Eigen::VectorXd& t) const { return table_.assemble(t); }
  /// tau (or kappa) for an operator built from amplitudes t.
  double normalization(const SparseOperator& op, const Eigen::VectorXd& t) const;
  AmplitudeVector amplitudes(const Eigen::VectorXd& t) const;
  void check_amplitudes(const Eigen::VectorXd& t) const;

  /// Total energy (electronic Rayleigh quotient plus core energy).
  double energy(const StateVector& psi) const;

 private:
  IntegralSet set_;
  SystemOptions options_;
  FockSpace space_;
  DeterminantBasis basis_;
  SparseOperator hamiltonian_;
  ExcitationTable table_;
  std::size_t reference_index_ = 0;
};

/// e^T |ref> by the terminating Taylor series.
StateVector state_exact_vcc(const VccSystem& sys, const Eigen::VectorXd& t);

/// Degree-d truncated Chebyshev expansion of e^T acting on |ref>.
StateVector state_cvcc(const VccSystem& sys, const Eigen::VectorXd& t, int degree);

/// Unitary factor exp((T - T^dagger) / 2) |psi>, either exact or as an ordered
/// product of single-term rotations.
StateVector apply_anti_hermitian_factor(const VccSystem& sys, const Eigen::VectorXd& t,
                                        UccMode mode, const std::vector<std::size_t>& ordering,
                                        const StateVector& psi);
StateVector state_anti_hermitian_exp(const VccSystem& sys, const Eigen::VectorXd& t,
                                     UccMode mode,
                                     const std::vector<std::size_t>& ordering = {});

/// exp((T - T^dagger)/2) exp((T + T^dagger)/2) |ref>.
StateVector state_trotter_vcc(const VccSystem& sys, const Eigen::VectorXd& t, UccMode mode,
                              const std::vector<std::size_t>& ordering = {});

/// Hermitian-part Chebyshev ansatz. `scale` replaces kappa when given (used to
/// mirror a block encoding whose subnormalization differs from kappa).
StateVector state_hcvcc(const VccSystem& sys, const Eigen::VectorXd& t, int degree,
                        UccMode mode, const std::vector<std::size_t>& ordering = {},
                        std::optional<double> scale = std::nullopt);

/// Dispatch on the ansatz method.
StateVector prepare_state(const VccSystem& sys, const AnsatzSpec& spec, const Eigen::VectorXd& t);

struct EnergyReport {
  double energy = 0.0;
  double norm_squared = 0.0;
  std::optional<AnsatzSpec> method;
  std::optional<AmplitudeVector> amplitudes;
};

/// Thrown when an ansatz state has (numerically) zero norm.
class NormCollapse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// <psi|H|psi> / <psi|psi>. Throws NormCollapse when <psi|psi> <= 1e-14 and
/// std::runtime_error when the quotient has a non-negligible imaginary part.
EnergyReport energy_rayleigh(const StateVector& psi, const SparseOperator& h);
EnergyReport energy_rayleigh(const Eigen::VectorXcd& psi, const SparseOperator& h);

/// Full report for one ansatz at amplitudes t (total energy incl. core).
EnergyReport evaluate_energy(const VccSystem& sys, const AnsatzSpec& spec, const Eigen::VectorXd& t);

/// <ref| e^{-T} H e^{T} |ref> (total energy), both exponentials as
/// terminating series.
double energy_projective_cc(const VccSystem& sys, const Eigen::VectorXd& t);

}  // namespace vcc
