#include "vcc/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vcc {

namespace {

std::vector<double> quadrature_coeffs(double tau, int degree, int nodes) {
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  std::vector<double> f(static_cast<std::size_t>(nodes));
  std::vector<double> theta(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) {
    theta[k] = std::numbers::pi * (k + 0.5) / nodes;
    f[k] = std::exp(tau * std::cos(theta[k]));
  }
  for (int n = 0; n <= degree; ++n) {
    double s = 0.0;
    for (int k = 0; k < nodes; ++k) s += f[k] * std::cos(n * theta[k]);
    c[n] = (n == 0 ? 1.0 : 2.0) * s / nodes;
  }
  return c;
}

}  // namespace

double chebyshev_t(int n, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double ChebCoefficients::evaluate(double x) const {
  double s = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) s += c[n] * chebyshev_t(static_cast<int>(n), x);
  return s;
}

ChebCoefficients cheb_coeffs_exp(double tau, int degree) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be >= 0");
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");

  ChebCoefficients out{tau, degree, {}};
  int nodes = 4 * (degree + 1) + 2 * static_cast<int>(std::ceil(tau)) + 16;
  out.c = quadrature_coeffs(tau, degree, nodes);
  for (int round = 0; round < 8; ++round) {
    nodes *= 2;
    auto refined = quadrature_coeffs(tau, degree, nodes);
    double change = 0.0, size = 0.0;
    for (std::size_t n = 0; n < refined.size(); ++n) {
      change = std::max(change, std::abs(refined[n] - out.c[n]));
      size = std::max(size, std::abs(refined[n]));
    }
    out.c = std::move(refined);
    if (change <= 8e-16 * size) break;
  }
  return out;
}

StateVector apply_cheb_series(const SparseOperator& a, const std::vector<double>& c,
                              const StateVector& v) {
  if (a.rows() != a.cols() || a.cols() != v.size())
    throw std::invalid_argument("apply_cheb_series: dimension mismatch");
  if (c.empty()) return StateVector::Zero(v.size());
  StateVector out = c[0] * v;
  if (c.size() == 1) return out;
  StateVector prev = v;
  StateVector cur = a * v;
  out += c[1] * cur;
  for (std::size_t n = 2; n < c.size(); ++n) {
    StateVector next = 2.0 * (a * cur) - prev;
    out += c[n] * next;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return out;
}

StateVector apply_cheb_series(const SparseOperator& a, const ChebCoefficients& coeffs,
                              const StateVector& v) {
  return apply_cheb_series(a, coeffs.c, v);
}

}  // namespace vcc
