#pragma once

#include <vector>

#include "vcc/operators.hpp"

namespace vcc {

/// Chebyshev coefficients of f(x) = exp(tau * x) on [-1, 1] truncated at
/// `degree`, so that sum_n c[n] T_n(A / tau) approximates exp(A).
struct ChebCoefficients {
  double tau = 0.0;
  int degree = 0;
  std::vector<double> c;

  /// sum_n c[n] T_n(x) for a scalar x.
  double evaluate(double x) const;
};

/// Coefficients by Chebyshev-Gauss quadrature (a discrete cosine transform of
/// exp(tau cos theta)); the node count starts at 4 (d + 1) and doubles until
/// aliasing is below machine precision.
ChebCoefficients cheb_coeffs_exp(double tau, int degree);

/// sum_{n<=d} c_n T_n(a) v via the vector three-term recurrence
/// w_{n+1} = 2 a w_n - w_{n-1}. `a` must have spectral norm at most 1.
StateVector apply_cheb_series(const SparseOperator& a, const ChebCoefficients& coeffs,
                              const StateVector& v);

/// Same recurrence with explicit coefficients (no exponential assumption).
StateVector apply_cheb_series(const SparseOperator& a, const std::vector<double>& c,
                              const StateVector& v);

/// T_n(x) for scalar x in [-1, 1] by recurrence.
double chebyshev_t(int n, double x);

}  // namespace vcc
