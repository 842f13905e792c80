#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "vcc/ansatz.hpp"
#include "vcc/linalg.hpp"

using namespace vcc;

namespace {

struct Fixture {
  IntegralSet set;
  VccSystem sys;
  explicit Fixture(const std::string& name)
      : set(read_fcidump(oracle::data_path(name))), sys(set) {}
};

Eigen::VectorXd amps(const VccSystem& sys, std::uint64_t seed, double scale) {
  return oracle::random_vector(static_cast<Eigen::Index>(sys.n_parameters()), seed, scale);
}

Eigen::MatrixXd dense(const SparseOperator& a) { return Eigen::MatrixXd(a); }

}  // namespace

TEST(Ansatz, ExactVccMatchesDenseExponential) {
  Fixture f("h4_1.50.fcidump");
  const auto t = amps(f.sys, 1, 0.2);
  const Eigen::VectorXd ref = oracle::dense_expm(dense(f.sys.cluster(t))) * f.sys.reference();
  EXPECT_LT((state_exact_vcc(f.sys, t) - ref).norm(), 1e-13);
}

TEST(Ansatz, CvccUsesSpectralNormScaling) {
  Fixture f("h4_1.00.fcidump");
  const auto t = amps(f.sys, 2, 0.2);
  const Eigen::MatrixXd tc = dense(f.sys.cluster(t));
  const double tau = Eigen::JacobiSVD<Eigen::MatrixXd>(tc).singularValues()[0];
  for (int d = 0; d <= 5; ++d) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(tc.rows(), tc.cols());
    Eigen::MatrixXd tn_prev = Eigen::MatrixXd::Identity(tc.rows(), tc.cols()), tn = tc / tau;
    for (int n = 0; n <= d; ++n) {
      const double c = (n == 0 ? 1.0 : 2.0) * oracle::bessel_i(n, tau);
      if (n == 0) {
        p += c * tn_prev;
      } else {
        p += c * tn;
        const Eigen::MatrixXd next = 2.0 * (tc / tau) * tn - tn_prev;
        tn_prev = tn;
        tn = next;
      }
    }
    EXPECT_LT((state_cvcc(f.sys, t, d) - p * f.sys.reference()).norm(), 1e-12) << d;
  }
  EXPECT_EQ(state_cvcc(f.sys, Eigen::VectorXd::Zero(t.size()), 3), f.sys.reference());
}

TEST(Ansatz, CvccConvergesToExactVcc) {
  Fixture f("h6_1.40.fcidump");
  const auto t = amps(f.sys, 3, 0.1);
  StateVector exact = state_exact_vcc(f.sys, t);
  exact.normalize();
  double prev = 1e300;
  for (int d = 1; d <= 12; ++d) {
    StateVector s = state_cvcc(f.sys, t, d);
    s.normalize();
    const double err = (s - exact).norm();
    EXPECT_LT(err, prev) << d;
    prev = err;
  }
  EXPECT_LT(prev, 1e-9);
}

TEST(Ansatz, SectorAndFullSpaceAgree) {
  const IntegralSet set = read_fcidump(oracle::data_path("h4_1.20.fcidump"));
  const VccSystem sec(set);
  SystemOptions o;
  o.sector_basis = false;
  const VccSystem full(set, o);
  const auto t = amps(sec, 4, 0.2);
  EXPECT_NEAR(spectral_norm(sec.cluster(t)), spectral_norm(full.cluster(t)), 1e-13);
  for (auto spec : {AnsatzSpec{Method::cvcc, 3, {}, {}, {}}, AnsatzSpec{Method::hcvcc, 2, {}, {}, {}},
                    AnsatzSpec{Method::trotter_vcc, {}, {}, {}, {}}})
    EXPECT_NEAR(evaluate_energy(sec, spec, t).energy, evaluate_energy(full, spec, t).energy, 1e-12);
}

TEST(Ansatz, AmplitudeNormOption) {
  const IntegralSet set = read_fcidump(oracle::data_path("h4_1.00.fcidump"));
  SystemOptions o;
  o.norm = NormKind::amplitude_2norm;
  const VccSystem sys(set, o);
  const auto t = amps(sys, 5, 0.2);
  EXPECT_DOUBLE_EQ(sys.normalization(sys.cluster(t), t), t.norm());
}

TEST(Ansatz, RayleighQuotientScaleInvariance) {
  Fixture f("h4_1.00.fcidump");
  const StateVector psi = oracle::random_vector(static_cast<Eigen::Index>(f.sys.basis().size()), 6);
  const double e = energy_rayleigh(psi, f.sys.hamiltonian()).energy;
  for (double s : {1e-3, -2.0, 1e4}) EXPECT_NEAR(energy_rayleigh(StateVector(s * psi), f.sys.hamiltonian()).energy, e, 1e-12);
  const Eigen::VectorXcd phased = psi.cast<std::complex<double>>() * std::polar(3.0, 0.7);
  EXPECT_NEAR(energy_rayleigh(phased, f.sys.hamiltonian()).energy, e, 1e-12);
  EXPECT_THROW(energy_rayleigh(StateVector(StateVector::Zero(psi.size())), f.sys.hamiltonian()), NormCollapse);
  EXPECT_THROW(energy_rayleigh(StateVector(StateVector::Zero(3)), f.sys.hamiltonian()), std::invalid_argument);
}

TEST(Ansatz, UnitaryFactorExactAndDisentangled) {
  Fixture f("h4_1.00.fcidump");
  const auto t = amps(f.sys, 7, 0.2);
  const SparseOperator tc = f.sys.cluster(t);
  const Eigen::MatrixXd k = 0.5 * (dense(tc) - dense(tc).transpose());
  const StateVector ref = oracle::dense_expm(k) * f.sys.reference();
  const StateVector exact = state_anti_hermitian_exp(f.sys, t, UccMode::exact_exponential);
  EXPECT_LT((exact - ref).norm(), 1e-13);
  EXPECT_NEAR(exact.norm(), 1.0, 1e-14);

  // Product of single-term exponentials, first listed factor acting first.
  std::vector<std::size_t> order(f.sys.n_parameters());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
  StateVector prod = f.sys.reference();
  for (std::size_t mu : order) {
    const Eigen::MatrixXd e = dense(f.sys.table().term(mu));
    prod = oracle::dense_expm(0.5 * t[mu] * (e - e.transpose())) * prod;
  }
  const StateVector dis = state_anti_hermitian_exp(f.sys, t, UccMode::disentangled_product, order);
  EXPECT_LT((dis - prod).norm(), 1e-13);
  EXPECT_GT((dis - exact).norm(), 1e-6);  // ordering matters at this amplitude scale
  EXPECT_THROW(state_anti_hermitian_exp(f.sys, t, UccMode::disentangled_product, {0, 1}),
               std::invalid_argument);
}

TEST(Ansatz, TrotterSplitErrorIsSecondOrder) {
  Fixture f("h4_2.00.fcidump");
  const auto t = amps(f.sys, 8, 0.3);
  auto err = [&](double s) {
    StateVector a = state_trotter_vcc(f.sys, s * t, UccMode::exact_exponential);
    StateVector b = state_exact_vcc(f.sys, s * t);
    return (a - b).norm();
  };
  for (double s : {0.2, 0.1}) {
    const double ratio = err(s) / err(s / 2);
    EXPECT_NEAR(ratio, 4.0, 0.4) << s;
  }
}

TEST(Ansatz, HcvccWithScaleMatchesDense) {
  Fixture f("h4_1.00.fcidump");
  const auto t = amps(f.sys, 9, 0.2);
  const Eigen::MatrixXd tc = dense(f.sys.cluster(t));
  const Eigen::MatrixXd herm = 0.5 * (tc + tc.transpose());
  const Eigen::MatrixXd anti = 0.5 * (tc - tc.transpose());
  const double kappa = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(herm).eigenvalues().cwiseAbs().maxCoeff();
  for (int d : {0, 2, 4}) {
    for (std::optional<double> scale : {std::optional<double>(), std::optional<double>(1.7)}) {
      const double k = scale ? *scale : kappa;
      Eigen::VectorXd v = Eigen::VectorXd::Zero(tc.rows());
      const Eigen::VectorXd r = f.sys.reference();
      Eigen::VectorXd prev = r, cur = herm / k * r;
      for (int n = 0; n <= d; ++n) {
        const double c = (n == 0 ? 1.0 : 2.0) * oracle::bessel_i(n, k);
        if (n == 0) {
          v += c * r;
        } else {
          v += c * cur;
          Eigen::VectorXd next = 2.0 * herm / k * cur - prev;
          prev = cur;
          cur = next;
        }
      }
      const Eigen::VectorXd ref = oracle::dense_expm(anti) * v;
      EXPECT_LT((state_hcvcc(f.sys, t, d, UccMode::exact_exponential, {}, scale) - ref).norm(), 1e-12);
    }
  }
}

TEST(Ansatz, ProjectiveEnergyMatchesDense) {
  Fixture f("h4_1.00.fcidump");
  const auto t = amps(f.sys, 10, 0.1);
  const Eigen::MatrixXd tc = dense(f.sys.cluster(t));
  const Eigen::MatrixXd h = dense(f.sys.hamiltonian());
  const Eigen::VectorXd r = f.sys.reference();
  const double ref = r.dot(oracle::dense_expm(-tc) * h * oracle::dense_expm(tc) * r) + f.set.core_energy();
  EXPECT_NEAR(energy_projective_cc(f.sys, t), ref, 1e-11);
  EXPECT_NEAR(energy_projective_cc(f.sys, Eigen::VectorXd::Zero(t.size())),
              f.sys.energy(f.sys.reference()), 1e-12);
}

TEST(Ansatz, SpecValidationAndNames) {
  for (const char* name : {"hf", "exact-vcc", "cvcc", "trotter", "ducc", "hcvcc", "hcvcc-circuit"})
    EXPECT_EQ(to_string(method_from_string(name)), name);
  EXPECT_THROW(method_from_string("ccsd"), std::invalid_argument);
  EXPECT_THROW(ucc_mode_from_string("x"), std::invalid_argument);
  EXPECT_THROW(combine_mode_from_string("x"), std::invalid_argument);
  EXPECT_THROW((AnsatzSpec{Method::cvcc, {}, {}, {}, {}}.validate(3)), std::invalid_argument);
  EXPECT_THROW((AnsatzSpec{Method::cvcc, -1, {}, {}, {}}.validate(3)), std::invalid_argument);
  EXPECT_THROW((AnsatzSpec{Method::exact_vcc, 2, {}, {}, {}}.validate(3)), std::invalid_argument);
  EXPECT_THROW((AnsatzSpec{Method::ducc, {}, {}, {0, 0, 1}, {}}.validate(3)), std::invalid_argument);
  EXPECT_NO_THROW((AnsatzSpec{Method::ducc, {}, {}, {2, 0, 1}, {}}.validate(3)));
  EXPECT_EQ((AnsatzSpec{Method::cvcc, 4, {}, {}, {}}.label()), "cvcc(d=4)");
}

TEST(Ansatz, AmplitudeChecks) {
  Fixture f("h2_0.74.fcidump");
  EXPECT_THROW(state_exact_vcc(f.sys, Eigen::VectorXd::Zero(7)), std::invalid_argument);
  Eigen::VectorXd t = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.sys.n_parameters()));
  t[0] = std::nan("");
  EXPECT_THROW(state_exact_vcc(f.sys, t), std::invalid_argument);
  const auto report = evaluate_energy(f.sys, AnsatzSpec{Method::hf, {}, {}, {}, {}},
                                      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.sys.n_parameters())));
  EXPECT_TRUE(report.method.has_value());
  EXPECT_EQ(report.amplitudes->size(), f.sys.n_parameters());
  EXPECT_NEAR(report.norm_squared, 1.0, 1e-15);
}
