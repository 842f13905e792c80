#pragma once

#include <Eigen/Core>

#include "vcc/operators.hpp"

namespace vcc {

/// Largest singular value. Dense SVD for small matrices, otherwise
/// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization run
/// until the Ritz residual is at machine-precision level. Returns 0 for the
/// zero matrix. Deterministic: the Krylov start vector comes from a fixed seed.
double spectral_norm(const SparseOperator& a);

/// Largest absolute column sum; a cheap upper bound on the spectral norm.
double one_norm(const SparseOperator& a);

/// exp(a) v by substepped Taylor series, each substep summed until the next
/// term is below machine precision relative to the running sum.
StateVector expm_action(const SparseOperator& a, const StateVector& v);

/// Lowest eigenpair of a symmetric operator by Lanczos with full
/// reorthogonalization.
struct Eigenpair {
  double value;
  StateVector vector;
};
Eigenpair lanczos_lowest(const SparseOperator& h, double tol = 1e-12, int max_iter = 0);

}  // namespace vcc
