#include "vcc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace vcc {

namespace {

constexpr Eigen::Index kDenseSvdLimit = 96;

// Platform-independent pseudo-random vector in [-1, 1).
Eigen::VectorXd seeded_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0;
  return v;
}

// Makes v orthogonal to the first k columns of Q (two passes) and returns
// the remaining norm.
double orthogonalize(Eigen::VectorXd& v, const Eigen::MatrixXd& q, Eigen::Index k) {
  if (k > 0) {
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd c = q.leftCols(k).transpose() * v;
      v.noalias() -= q.leftCols(k) * c;
    }
  }
  return v.norm();
}

// Replaces a collapsed Krylov direction by a fresh seeded vector orthogonal to
// the current basis. Returns false when the basis already spans the space.
bool restart_direction(Eigen::VectorXd& v, const Eigen::MatrixXd& q, Eigen::Index k,
                       std::uint64_t seed) {
  if (k >= q.rows()) return false;
  for (int attempt = 0; attempt < 4; ++attempt) {
    v = seeded_vector(q.rows(), seed + static_cast<std::uint64_t>(attempt) * 7919);
    const double n = orthogonalize(v, q, k);
    if (n > 1e-8) {
      v /= n;
      return true;
    }
  }
  return false;
}

double dense_spectral_norm(const SparseOperator& a) {
  const Eigen::MatrixXd dense(a);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

}  // namespace

double one_norm(const SparseOperator& a) {
  Eigen::VectorXd col = Eigen::VectorXd::Zero(a.cols());
  for (Eigen::Index r = 0; r < a.outerSize(); ++r)
    for (SparseOperator::InnerIterator it(a, r); it; ++it) col[it.col()] += std::abs(it.value());
  return col.size() ? col.maxCoeff() : 0.0;
}

double spectral_norm(const SparseOperator& a) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (a.nonZeros() == 0 || m == 0 || n == 0) return 0.0;
  const double scale = a.coeffs().cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  if (std::min(m, n) <= kDenseSvdLimit) return dense_spectral_norm(a);

  const Eigen::Index kmax = std::min(m, n);
  Eigen::MatrixXd u(m, kmax + 1);
  Eigen::MatrixXd v(n, kmax + 1);
  std::vector<double> alpha;
  std::vector<double> beta;

  Eigen::VectorXd x = seeded_vector(n, 0x5eed);
  x.normalize();
  v.col(0) = x;
  Eigen::VectorXd p = a * x;
  double al = p.norm();
  if (al <= 1e-300) {
    if (!restart_direction(p, u, 0, 101)) return 0.0;
    al = 0.0;
  } else {
    p /= al;
  }
  u.col(0) = p;
  alpha.push_back(al);

  double sigma = al;
  for (Eigen::Index k = 1; k <= kmax; ++k) {
    Eigen::VectorXd r = a.transpose() * u.col(k - 1);
    r.noalias() -= alpha.back() * v.col(k - 1);
    double be = orthogonalize(r, v, k);

    // Ritz estimate from B B^T, B the k x k upper bidiagonal (alpha, beta).
    Eigen::VectorXd diag(k), sub(std::max<Eigen::Index>(k - 1, 0));
    for (Eigen::Index i = 0; i < k; ++i) {
      const double ai = alpha[static_cast<std::size_t>(i)];
      const double bi = i + 1 < k ? beta[static_cast<std::size_t>(i)] : 0.0;
      diag[i] = ai * ai + bi * bi;
      if (i + 1 < k) sub[i] = bi * alpha[static_cast<std::size_t>(i + 1)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    sigma = std::sqrt(std::max(0.0, es.eigenvalues()[k - 1]));
    const double residual = be * std::abs(es.eigenvectors()(k - 1, k - 1));
    if (residual <= 1e-14 * sigma || k == kmax) break;

    if (be <= 1e-13 * scale) {
      if (!restart_direction(r, v, k, 977 + static_cast<std::uint64_t>(k))) break;
      be = 0.0;
    } else {
      r /= be;
    }
    v.col(k) = r;
    beta.push_back(be);

    Eigen::VectorXd s = a * v.col(k);
    s.noalias() -= be * u.col(k - 1);
    al = orthogonalize(s, u, k);
    if (al <= 1e-13 * scale) {
      if (!restart_direction(s, u, k, 1543 + static_cast<std::uint64_t>(k))) {
        // Left space exhausted; the remaining singular values are zero.
        alpha.push_back(0.0);
        break;
      }
      al = 0.0;
    } else {
      s /= al;
    }
    u.col(k) = s;
    alpha.push_back(al);
  }
  return sigma;
}

StateVector expm_action(const SparseOperator& a, const StateVector& v) {
  if (a.cols() != v.size()) throw std::invalid_argument("expm_action: dimension mismatch");
  const double norm = one_norm(a);
  if (norm == 0.0) return v;
  const int steps = std::max(1, static_cast<int>(std::ceil(norm)));
  const double h = 1.0 / steps;
  const double eps = std::numeric_limits<double>::epsilon();

  StateVector x = v;
  for (int s = 0; s < steps; ++s) {
    StateVector term = x;
    StateVector sum = x;
    int small = 0;
    for (int k = 1; k <= 200; ++k) {
      term = (h / k) * (a * term);
      sum += term;
      const double tn = term.cwiseAbs().maxCoeff();
      if (tn <= 0.1 * eps * sum.cwiseAbs().maxCoeff()) {
        if (++small == 2) break;
      } else {
        small = 0;
      }
    }
    x = std::move(sum);
  }
  return x;
}

Eigenpair lanczos_lowest(const SparseOperator& h, double tol, int max_iter) {
  const Eigen::Index n = h.rows();
  if (n == 0) throw std::invalid_argument("lanczos_lowest: empty operator");
  if (n == 1) return {h.coeff(0, 0), StateVector::Ones(1)};
  const Eigen::Index kmax = max_iter > 0 ? std::min<Eigen::Index>(max_iter, n) : n;

  Eigen::MatrixXd q(n, kmax + 1);
  std::vector<double> alpha, beta;
  Eigen::VectorXd x = seeded_vector(n, 0xfc1);
  x.normalize();
  q.col(0) = x;
  double theta = 0.0;
  Eigen::VectorXd ritz;
  const double scale = std::max(1.0, h.coeffs().cwiseAbs().maxCoeff());

  for (Eigen::Index k = 0; k < kmax; ++k) {
    Eigen::VectorXd w = h * q.col(k);
    const double al = q.col(k).dot(w);
    alpha.push_back(al);
    w.noalias() -= al * q.col(k);
    if (k > 0) w.noalias() -= beta.back() * q.col(k - 1);
    double be = orthogonalize(w, q, k + 1);

    const Eigen::Index m = k + 1;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    theta = es.eigenvalues()[0];
    ritz = es.eigenvectors().col(0);
    const double residual = be * std::abs(ritz[m - 1]);
    if (residual <= tol * std::max(1.0, std::abs(theta)) || m == kmax) break;

    if (be <= 1e-12 * scale) {
      if (!restart_direction(w, q, m, 31 + static_cast<std::uint64_t>(k))) break;
      be = 0.0;
    } else {
      w /= be;
    }
    beta.push_back(be);
    q.col(m) = w;
  }
  StateVector vec = q.leftCols(ritz.size()) * ritz;
  vec.normalize();
  return {theta, vec};
}

}  // namespace vcc
