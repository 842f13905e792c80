#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "vcc/qsvt.hpp"

using namespace vcc;

namespace {

SparseOperator random_symmetric(int q, double density, std::uint64_t seed) {
  const Eigen::Index dim = Eigen::Index{1} << q;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = i; j < dim; ++j)
      if (u(rng) < density) m(i, j) = m(j, i) = n(rng);
  return m.sparseView();
}

double poly(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) s += c[n] * chebyshev_t(static_cast<int>(n), x);
  return s;
}

}  // namespace

TEST(Pauli, SingleQubitMatrices) {
  const PauliString x{1, 0}, y{1, 1}, z{0, 1};
  EXPECT_EQ(x.to_string(1), "X");
  EXPECT_EQ(y.to_string(1), "Y");
  EXPECT_EQ(z.to_string(2), "ZI");
  // Y|0> = i|1>, Y|1> = -i|0>
  EXPECT_EQ(y.phase(0), std::complex<double>(0, 1));
  EXPECT_EQ(y.phase(1), std::complex<double>(0, -1));
  EXPECT_EQ(z.phase(1), -1.0);
}

TEST(Pauli, DecompositionRoundTrip) {
  for (int q = 1; q <= 5; ++q) {
    const SparseOperator a = random_symmetric(q, 0.4, 100 + q);
    const auto dec = pauli_decompose(a);
    EXPECT_EQ(dec.n_qubits, q);
    EXPECT_LT((dec.to_dense() - Eigen::MatrixXd(a).cast<std::complex<double>>()).cwiseAbs().maxCoeff(), 1e-13);
    double l1 = 0.0;
    for (const auto& t : dec.terms) l1 += std::abs(t.weight);
    EXPECT_NEAR(dec.one_norm, l1, 1e-14);
    EXPECT_FALSE(dec.to_text().empty());
  }
}

TEST(Pauli, DecompositionRejectsBadInput) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 1) = 1.0;
  EXPECT_THROW(pauli_decompose(m.sparseView()), std::invalid_argument);
  EXPECT_THROW(pauli_decompose(SparseOperator(3, 3)), std::invalid_argument);
}

TEST(BlockEncoding, UnitaryHermitianAndEncodesBlock) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const SparseOperator a = random_symmetric(3, 0.5, seed);
    const BlockEncoding be(pauli_decompose(a));
    const ComplexMatrix u = be.unitary();
    const Eigen::Index dim = u.rows();
    EXPECT_LT((u.adjoint() * u - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((u - u.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
    const ComplexMatrix blk = be.block();
    const Eigen::MatrixXd target = Eigen::MatrixXd(a) / be.subnormalization();
    EXPECT_LT((blk - target.cast<std::complex<double>>()).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NEAR(be.prepare_amplitudes().squaredNorm(), 1.0, 1e-14);
  }
}

TEST(Qsp, ChebyshevPhasesRealizeTn) {
  for (int n = 0; n <= 9; ++n) {
    const auto ps = chebyshev_phases(n);
    EXPECT_EQ(ps.phases.size(), static_cast<std::size_t>(n + 1));
    EXPECT_LT(ps.residual, 1e-13);
    for (double x : {-0.9, -0.2, 0.4, 1.0}) EXPECT_NEAR(ps.polynomial(x), chebyshev_t(n, x), 1e-13);
  }
  EXPECT_THROW(chebyshev_phases(-1), std::invalid_argument);
}

TEST(Qsp, PhaseFindingForRandomPolynomials) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int degree = 1; degree <= 8; ++degree) {
    const Parity parity = degree % 2 ? Parity::odd : Parity::even;
    std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
    for (int n = degree % 2; n <= degree; n += 2) c[n] = normal(rng);
    const double sup = chebyshev_sup_norm(c);
    for (double& v : c) v *= 0.9 / sup;
    const auto ps = qsp_phase_find(c, parity);
    EXPECT_LE(ps.residual, 1e-8);
    for (int k = 0; k <= 20; ++k) {
      const double x = -1.0 + 0.1 * k;
      EXPECT_NEAR(ps.polynomial(x), poly(c, x), 1e-8) << degree;
    }
  }
}

TEST(Qsp, PhaseFindingNearUnitSupNorm) {
  // even part of exp(tau x) scaled to just below 1
  const auto c = cheb_coeffs_exp(3.0, 6).c;
  std::vector<double> even(c.size(), 0.0);
  for (std::size_t n = 0; n < c.size(); n += 2) even[n] = c[n];
  const double sup = chebyshev_sup_norm(even);
  for (double& v : even) v *= 0.999 / sup;
  EXPECT_LE(qsp_phase_find(even, Parity::even).residual, 1e-8);
}

TEST(Qsp, PhaseFindingPreconditions) {
  EXPECT_THROW(qsp_phase_find({0.1, 0.5}, Parity::even), std::invalid_argument);
  EXPECT_THROW(qsp_phase_find({0.0, 1.2}, Parity::odd), std::invalid_argument);
  const auto ps = qsp_phase_find({0.3}, Parity::even);
  EXPECT_NEAR(ps.polynomial(0.5), 0.3, 1e-14);
}

TEST(Qsvt, BlockIsChebyshevPolynomialOfEncodedMatrix) {
  const SparseOperator a = random_symmetric(2, 0.7, 11);
  const BlockEncoding be(pauli_decompose(a));
  const Eigen::MatrixXd x = Eigen::MatrixXd(a) / be.subnormalization();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  for (int n = 0; n <= 5; ++n) {
    const QsvtCircuit circuit(be, chebyshev_phases(n));
    Eigen::VectorXd tn = es.eigenvalues().unaryExpr([n](double v) { return chebyshev_t(n, v); });
    const Eigen::MatrixXd ref = es.eigenvectors() * tn.asDiagonal() * es.eigenvectors().transpose();
    EXPECT_LT((circuit.block() - ref.cast<std::complex<double>>()).cwiseAbs().maxCoeff(), 1e-12) << n;
    const ComplexMatrix full = qsvt_apply(be, chebyshev_phases(n));
    EXPECT_LT((full.adjoint() * full - ComplexMatrix::Identity(full.rows(), full.cols())).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Qsvt, CircuitMatchesMatrixAnsatzOnH2) {
  const IntegralSet set = read_fcidump(oracle::data_path("h2_0.74.fcidump"));
  const VccSystem sys(set);
  const auto t = oracle::random_vector(static_cast<Eigen::Index>(sys.n_parameters()), 42, 0.3);
  for (int d = 0; d <= 4; ++d)
    for (CombineMode mode : {CombineMode::per_term, CombineMode::even_odd}) {
      const auto res = assemble_hcvcc_circuit(sys, t, d, mode);
      StateVector ref = state_hcvcc(sys, t, d, UccMode::exact_exponential, {}, res.lambda);
      ref.normalize();
      EXPECT_LT((res.state - ref).norm(), 1e-10);
      EXPECT_LE(res.block_residual, 1e-12);
      EXPECT_GT(res.success_amplitude, 0.0);
      EXPECT_LE(res.success_amplitude, 1.0 + 1e-12);
    }
}

TEST(Qsvt, ZeroAmplitudesAndLimits) {
  const IntegralSet h2 = read_fcidump(oracle::data_path("h2_0.74.fcidump"));
  const VccSystem sys(h2);
  const auto res = assemble_hcvcc_circuit(sys, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.n_parameters())), 3,
                                          CombineMode::per_term);
  EXPECT_EQ(res.state, sys.reference());
  EXPECT_DOUBLE_EQ(res.success_amplitude, 1.0);
  const IntegralSet h6 = read_fcidump(oracle::data_path("h6_1.00.fcidump"));
  const VccSystem big(h6);
  EXPECT_THROW(assemble_hcvcc_circuit(big, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(big.n_parameters())), 1,
                                      CombineMode::per_term),
               std::invalid_argument);
}

TEST(Qsvt, PerTermDegreeZeroSuccessAmplitude) {
  const IntegralSet set = read_fcidump(oracle::data_path("h2_0.74.fcidump"));
  const VccSystem sys(set);
  const auto t = oracle::random_vector(static_cast<Eigen::Index>(sys.n_parameters()), 3, 0.3);
  const auto res = assemble_hcvcc_circuit(sys, t, 0, CombineMode::per_term);
  // A single LCU branch with weight c_0 realizes c_0 I / c_0.
  EXPECT_NEAR(res.success_amplitude, 1.0, 1e-14);
}
