#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "vcc/chebyshev.hpp"

using namespace vcc;

TEST(Chebyshev, CoefficientsMatchBesselOracle) {
  for (double tau : {0.0, 0.05, 0.3, 1.0, 2.5, 7.0}) {
    const auto c = cheb_coeffs_exp(tau, 12);
    ASSERT_EQ(c.c.size(), 13u);
    for (int n = 0; n <= 12; ++n) {
      const double ref = (n == 0 ? 1.0 : 2.0) * oracle::bessel_i(n, tau);
      EXPECT_NEAR(c.c[n], ref, 1e-12 * std::max(1.0, std::abs(ref))) << "tau=" << tau << " n=" << n;
    }
  }
}

TEST(Chebyshev, ZeroDegreeIsBesselI0) {
  EXPECT_NEAR(cheb_coeffs_exp(1.3, 0).c.at(0), oracle::bessel_i(0, 1.3), 1e-14);
  EXPECT_DOUBLE_EQ(cheb_coeffs_exp(0.0, 3).c[0], 1.0);
  EXPECT_THROW(cheb_coeffs_exp(-1.0, 2), std::invalid_argument);
  EXPECT_THROW(cheb_coeffs_exp(1.0, -1), std::invalid_argument);
}

TEST(Chebyshev, TruncatedSeriesConvergesToExp) {
  double prev = 1e300;
  for (int d = 0; d <= 14; ++d) {
    const auto c = cheb_coeffs_exp(2.0, d);
    double worst = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double x = -1.0 + 0.02 * k;
      worst = std::max(worst, std::abs(c.evaluate(x) - std::exp(2.0 * x)));
    }
    EXPECT_LT(worst, prev);
    prev = worst;
  }
  EXPECT_LT(prev, 1e-10);
}

TEST(Chebyshev, PolynomialIdentities) {
  for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
    const double th = std::acos(x);
    for (int n = 0; n < 10; ++n) EXPECT_NEAR(chebyshev_t(n, x), std::cos(n * th), 1e-13);
  }
}

TEST(Chebyshev, SeriesOnDiagonalOperatorMatchesScalar) {
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(9, -1.0, 1.0);
  const SparseOperator a = Eigen::MatrixXd(x.asDiagonal()).sparseView();
  const auto c = cheb_coeffs_exp(1.7, 6);
  const Eigen::VectorXd v = oracle::random_vector(9, 4);
  const StateVector out = apply_cheb_series(a, c, v);
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(out[i], c.evaluate(x[i]) * v[i], 1e-13);
  EXPECT_THROW(apply_cheb_series(a, c, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}
