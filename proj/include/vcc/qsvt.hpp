#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vcc/ansatz.hpp"
#include "vcc/operators.hpp"

namespace vcc {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Tensor product of single-qubit Paulis. Qubit k carries X if bit k of
/// x_mask is set, Z if bit k of z_mask is set, Y if both.
struct PauliString {
  std::uint32_t x_mask = 0;
  std::uint32_t z_mask = 0;

  /// Characters for qubits 0..n-1, qubit 0 first.
  std::string to_string(int n_qubits) const;
  int y_count() const;
  /// P|basis> = phase * |basis ^ x_mask>.
  std::complex<double> phase(std::uint64_t basis) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

struct PauliTerm {
  PauliString pauli;
  double weight = 0.0;
};

struct PauliDecomposition {
  int n_qubits = 0;
  std::vector<PauliTerm> terms;
  double one_norm = 0.0;  ///< lambda = sum |weight|

  ComplexMatrix to_dense() const;
  /// One `weight pauli-string` line per term.
  std::string to_text() const;
};

/// Weights tr(P A) / 2^q over all Pauli strings (Walsh-Hadamard transform per
/// X-pattern); |w| < 1e-13 dropped. A must be a Hermitian full-space operator.
PauliDecomposition pauli_decompose(const SparseOperator& a);

/// Pauli-LCU block encoding U = PREP^dagger SELECT PREP on m ancilla qubits
/// plus q system qubits; system qubits occupy the low bits of an index.
/// PREP is a real Householder reflection and every SELECT branch is a signed
/// Pauli string, so U is a Hermitian reflection.
class BlockEncoding {
 public:
  explicit BlockEncoding(PauliDecomposition dec);

  int n_system_qubits() const { return dec_.n_qubits; }
  int n_ancillas() const { return m_; }
  double subnormalization() const { return dec_.one_norm; }
  const PauliDecomposition& decomposition() const { return dec_; }
  const Eigen::VectorXd& prepare_amplitudes() const { return prep_; }

  /// Applies U in place to every (system, ancilla) slab of x, where x is laid
  /// out as [system q][ancilla m][any higher registers].
  void apply(ComplexVector& x) const;

  /// Dense U on m + q qubits (small sizes only).
  ComplexMatrix unitary() const;
  /// <0^m| U |0^m>, the encoded block (should be A / lambda).
  ComplexMatrix block() const;

 private:
  void apply_prepare(ComplexVector& x) const;
  void apply_select(ComplexVector& x) const;

  PauliDecomposition dec_;
  int m_ = 0;
  Eigen::VectorXd prep_;      // PREP|0> amplitudes sqrt(|w_k| / lambda)
  Eigen::VectorXd householder_;  // reflection vector mapping e_0 to prep_
};

enum class Parity { even, odd };

/// QSP phases in the reflection convention: the scalar response is
/// <0| e^{i phi_0 Z} R(x) e^{i phi_1 Z} ... R(x) e^{i phi_n Z} |0> with
/// R(x) = [[x, s], [s, -x]], s = sqrt(1 - x^2); the realized polynomial is
/// its real part.
struct PhaseSequence {
  std::vector<double> phases;
  Parity parity = Parity::even;
  int target_degree = 0;
  double residual = 0.0;  ///< max deviation on the 201-point check grid

  std::complex<double> response(double x) const;
  double polynomial(double x) const { return response(x).real(); }
};

/// Analytic phases realizing T_n exactly.
PhaseSequence chebyshev_phases(int n);

class PhaseFindingError : public std::runtime_error {
 public:
  PhaseFindingError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Optimization-based phase finding for a real polynomial given by its
/// Chebyshev-basis coefficients. The target must have the declared parity and
/// satisfy max |p(x)| <= 1 - 1e-4 on [-1, 1].
PhaseSequence qsp_phase_find(const std::vector<double>& chebyshev_coeffs, Parity parity);

/// Maximum of |sum c_n T_n(x)| over [-1, 1] sampled on a fine grid plus the
/// endpoints.
double chebyshev_sup_norm(const std::vector<double>& chebyshev_coeffs);

/// QSVT sequence with one signal-processing qubit that averages the phase
/// sequence and its negation, so the projected block is Re P(A / lambda).
/// Register layout: [system q][ancilla m][signal 1][higher registers].
class QsvtCircuit {
 public:
  QsvtCircuit(const BlockEncoding& be, PhaseSequence phases);

  int n_qubits() const { return be_->n_system_qubits() + be_->n_ancillas() + 1; }
  const PhaseSequence& phases() const { return phases_; }

  /// Applies the circuit to every (1 + m + q)-qubit slab of x.
  void apply(ComplexVector& x) const;
  ComplexMatrix matrix() const;
  /// The <0|_signal <0^m|_anc projected block.
  ComplexMatrix block() const;

 private:
  void apply_phase(ComplexVector& x, double phi) const;
  void apply_signal_hadamard(ComplexVector& x) const;

  const BlockEncoding* be_;
  PhaseSequence phases_;
};

/// Dense matrix of qsvt_apply(be, phases) on 1 + m + q qubits.
ComplexMatrix qsvt_apply(const BlockEncoding& be, const PhaseSequence& phases);

struct CircuitResult {
  StateVector state;          ///< normalized, in the system's basis
  double success_amplitude;   ///< norm of the projected state before renormalization
  double lambda;              ///< block-encoding subnormalization (0 when T = 0)
  int n_ancillas;             ///< block-encoding ancillas m
  int n_lcu_qubits;
  double block_residual;      ///< max |<0|U|0> - A/lambda|
  double phase_residual;      ///< worst phase-finding residual (0 for analytic phases)
};

/// Largest system for circuit emulation.
inline constexpr int kMaxCircuitQubits = 8;

/// Emulates the HC^d circuit: Chebyshev series of exp(A) realized by QSVT on a
/// Pauli-LCU block encoding of A = (T + T^dagger)/2 with coefficients for
/// exp(lambda x), combined either per degree or as even/odd parts, projected
/// on all-zero ancillas, followed by the anti-Hermitian factor.
CircuitResult assemble_hcvcc_circuit(const VccSystem& sys, const Eigen::VectorXd& t, int degree,
                                     CombineMode combine, UccMode ucc_mode = UccMode::exact_exponential,
                                     const std::vector<std::size_t>& ordering = {});

}  // namespace vcc
