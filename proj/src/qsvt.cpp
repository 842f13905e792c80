#include "vcc/qsvt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "vcc/chebyshev.hpp"

namespace vcc {

namespace {

using cd = std::complex<double>;
constexpr int kMaxDenseQubits = 12;
// Even/odd parts are scaled to this sup-norm before phase finding.
constexpr double kQspTargetMax = 1.0 - 1e-3;

int ceil_log2(std::size_t n) {
  int m = 0;
  while ((std::size_t{1} << m) < n) ++m;
  return m;
}

// Householder vector v with (I - 2 v v^T / v^T v) e_0 = p; empty when p = e_0.
Eigen::VectorXd householder_to(const Eigen::VectorXd& p) {
  Eigen::VectorXd v = -p;
  v[0] += 1.0;
  if (v.squaredNorm() < 1e-30) return {};
  return v;
}

// Applies the reflection to the register that starts at bit `shift` and has
// `bits` qubits, for every value of the other bits.
void apply_householder(ComplexVector& x, const Eigen::VectorXd& v, int shift, int bits) {
  if (v.size() == 0) return;
  const double scale = 2.0 / v.squaredNorm();
  const std::size_t low = std::size_t{1} << shift;
  const std::size_t reg = std::size_t{1} << bits;
  const std::size_t block = low * reg;
  const std::size_t n = static_cast<std::size_t>(x.size());
  std::vector<cd> dots(low);
  for (std::size_t base = 0; base < n; base += block) {
    std::fill(dots.begin(), dots.end(), cd{0.0, 0.0});
    for (std::size_t k = 0; k < reg; ++k) {
      const double vk = v[static_cast<Eigen::Index>(k)];
      if (vk == 0.0) continue;
      const std::size_t off = base + k * low;
      for (std::size_t s = 0; s < low; ++s) dots[s] += vk * x[static_cast<Eigen::Index>(off + s)];
    }
    for (std::size_t k = 0; k < reg; ++k) {
      const double vk = scale * v[static_cast<Eigen::Index>(k)];
      if (vk == 0.0) continue;
      const std::size_t off = base + k * low;
      for (std::size_t s = 0; s < low; ++s) x[static_cast<Eigen::Index>(off + s)] -= vk * dots[s];
    }
  }
}

void hadamard(ComplexVector& x, int bit) {
  const std::size_t mask = std::size_t{1} << bit;
  const double r = std::numbers::sqrt2 / 2.0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(x.size()); ++i) {
    if (i & mask) continue;
    const cd a = x[static_cast<Eigen::Index>(i)];
    const cd b = x[static_cast<Eigen::Index>(i | mask)];
    x[static_cast<Eigen::Index>(i)] = r * (a + b);
    x[static_cast<Eigen::Index>(i | mask)] = r * (a - b);
  }
}

template <typename Apply>
ComplexMatrix dense_from_action(int n_qubits, Apply&& apply) {
  if (n_qubits > kMaxDenseQubits)
    throw std::length_error("dense matrix on " + std::to_string(n_qubits) +
                            " qubits exceeds the emulator limit");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  ComplexMatrix out(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    ComplexVector e = ComplexVector::Zero(dim);
    e[c] = 1.0;
    apply(e);
    out.col(c) = e;
  }
  return out;
}

// Block <0|_upper U |0>_upper for the low `low_qubits` qubits.
template <typename Apply>
ComplexMatrix projected_block(int low_qubits, int total_qubits, Apply&& apply) {
  const Eigen::Index low = Eigen::Index{1} << low_qubits;
  const Eigen::Index dim = Eigen::Index{1} << total_qubits;
  ComplexMatrix out(low, low);
  for (Eigen::Index c = 0; c < low; ++c) {
    ComplexVector e = ComplexVector::Zero(dim);
    e[c] = 1.0;
    apply(e);
    out.col(c) = e.head(low);
  }
  return out;
}

using Mat2 = Eigen::Matrix2cd;

Mat2 zphase(double phi) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = std::polar(1.0, phi);
  m(1, 1) = std::polar(1.0, -phi);
  return m;
}

Mat2 reflection_signal(double x) {
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  Mat2 m;
  m << x, s, s, -x;
  return m;
}

Mat2 wx_signal(double x) {
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  Mat2 m;
  m << x, cd(0, s), cd(0, s), x;
  return m;
}

// Re <0| e^{i phi_0 Z} W e^{i phi_1 Z} ... W e^{i phi_n Z} |0> and its phase
// gradient (Wx convention).
double wx_response(const std::vector<double>& phi, double x, std::vector<double>* grad) {
  const std::size_t n = phi.size() - 1;
  const Mat2 w = wx_signal(x);
  // U = left[k] e^{i phi_k Z} right[k]
  std::vector<Mat2> left(n + 1), right(n + 1);
  left[0] = Mat2::Identity();
  for (std::size_t k = 1; k <= n; ++k) left[k] = left[k - 1] * zphase(phi[k - 1]) * w;
  right[n] = Mat2::Identity();
  for (std::size_t k = n; k-- > 0;) right[k] = w * zphase(phi[k + 1]) * right[k + 1];
  if (grad) {
    grad->assign(n + 1, 0.0);
    Mat2 iz = Mat2::Zero();
    iz(0, 0) = cd(0, 1);
    iz(1, 1) = cd(0, -1);
    for (std::size_t k = 0; k <= n; ++k)
      (*grad)[k] = (left[k] * iz * zphase(phi[k]) * right[k])(0, 0).real();
  }
  return (zphase(phi[0]) * right[0])(0, 0).real();
}

}  // namespace

// ---------------------------------------------------------------------------
// Pauli algebra

std::string PauliString::to_string(int n_qubits) const {
  std::string s;
  for (int k = 0; k < n_qubits; ++k) {
    const bool x = x_mask >> k & 1;
    const bool z = z_mask >> k & 1;
    s += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }
  return s;
}

int PauliString::y_count() const { return std::popcount(x_mask & z_mask); }

std::complex<double> PauliString::phase(std::uint64_t basis) const {
  static const cd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  cd p = ipow[y_count() % 4];
  if (std::popcount(basis & z_mask) & 1) p = -p;
  return p;
}

ComplexMatrix PauliDecomposition::to_dense() const {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (const auto& term : terms)
    for (Eigen::Index r = 0; r < dim; ++r)
      m(static_cast<Eigen::Index>(static_cast<std::uint64_t>(r) ^ term.pauli.x_mask), r) +=
          term.weight * term.pauli.phase(static_cast<std::uint64_t>(r));
  return m;
}

std::string PauliDecomposition::to_text() const {
  std::ostringstream out;
  out.precision(17);
  for (const auto& t : terms) out << t.weight << ' ' << t.pauli.to_string(n_qubits) << '\n';
  return out.str();
}

PauliDecomposition pauli_decompose(const SparseOperator& a) {
  const Eigen::Index dim = a.rows();
  if (a.cols() != dim || dim == 0 || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("pauli_decompose: operator must be square with 2^q rows");
  const int q = std::countr_zero(static_cast<std::uint64_t>(dim));
  if (q > 31) throw std::invalid_argument("pauli_decompose: too many qubits");
  const SparseOperator diff = a - SparseOperator(a.transpose());
  const double asym = diff.nonZeros() ? diff.coeffs().cwiseAbs().maxCoeff() : 0.0;
  if (asym > 1e-12) throw std::invalid_argument("pauli_decompose: operator is not Hermitian");

  // Entries grouped by X pattern r ^ c.
  std::map<std::uint64_t, std::vector<double>> groups;
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    for (SparseOperator::InnerIterator it(a, r); it; ++it) {
      if (it.value() == 0.0) continue;
      const std::uint64_t x = static_cast<std::uint64_t>(it.row()) ^ static_cast<std::uint64_t>(it.col());
      auto& f = groups[x];
      if (f.empty()) f.assign(static_cast<std::size_t>(dim), 0.0);
      f[static_cast<std::size_t>(it.row())] += it.value();
    }
  }

  PauliDecomposition dec;
  dec.n_qubits = q;
  const double inv = 1.0 / static_cast<double>(dim);
  for (auto& [x, f] : groups) {
    // Walsh-Hadamard: S(z) = sum_r f[r] (-1)^{popcount(r & z)}
    for (std::size_t h = 1; h < f.size(); h <<= 1)
      for (std::size_t i = 0; i < f.size(); i += 2 * h)
        for (std::size_t j = i; j < i + h; ++j) {
          const double u = f[j], v = f[j + h];
          f[j] = u + v;
          f[j + h] = u - v;
        }
    for (std::size_t z = 0; z < f.size(); ++z) {
      const double s = f[z] * inv;
      if (std::abs(s) < 1e-13) continue;
      const int ny = std::popcount(x & z);
      if (ny % 2) throw std::invalid_argument("pauli_decompose: operator is not Hermitian");
      const double w = (ny / 2) % 2 ? -s : s;
      dec.terms.push_back({{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(z)}, w});
      dec.one_norm += std::abs(w);
    }
  }
  return dec;
}

// ---------------------------------------------------------------------------
// Block encoding

BlockEncoding::BlockEncoding(PauliDecomposition dec) : dec_(std::move(dec)) {
  if (dec_.terms.empty()) throw std::invalid_argument("block encoding needs at least one term");
  m_ = ceil_log2(dec_.terms.size());
  prep_ = Eigen::VectorXd::Zero(Eigen::Index{1} << m_);
  for (std::size_t k = 0; k < dec_.terms.size(); ++k)
    prep_[static_cast<Eigen::Index>(k)] = std::sqrt(std::abs(dec_.terms[k].weight) / dec_.one_norm);
  householder_ = householder_to(prep_);
}

void BlockEncoding::apply_prepare(ComplexVector& x) const {
  apply_householder(x, householder_, dec_.n_qubits, m_);
}

void BlockEncoding::apply_select(ComplexVector& x) const {
  const std::size_t low = std::size_t{1} << dec_.n_qubits;
  const std::size_t slab = low << m_;
  std::vector<cd> tmp(low);
  for (std::size_t base = 0; base < static_cast<std::size_t>(x.size()); base += slab) {
    for (std::size_t k = 0; k < dec_.terms.size(); ++k) {
      const auto& term = dec_.terms[k];
      const double sign = term.weight < 0 ? -1.0 : 1.0;
      const std::size_t off = base + k * low;
      for (std::size_t r = 0; r < low; ++r)
        tmp[r ^ term.pauli.x_mask] = sign * term.pauli.phase(r) * x[static_cast<Eigen::Index>(off + r)];
      for (std::size_t r = 0; r < low; ++r) x[static_cast<Eigen::Index>(off + r)] = tmp[r];
    }
  }
}

void BlockEncoding::apply(ComplexVector& x) const {
  apply_prepare(x);
  apply_select(x);
  apply_prepare(x);  // the Householder PREP is its own inverse
}

ComplexMatrix BlockEncoding::unitary() const {
  return dense_from_action(dec_.n_qubits + m_, [&](ComplexVector& v) { apply(v); });
}

ComplexMatrix BlockEncoding::block() const {
  return projected_block(dec_.n_qubits, dec_.n_qubits + m_, [&](ComplexVector& v) { apply(v); });
}

// ---------------------------------------------------------------------------
// QSP phases

std::complex<double> PhaseSequence::response(double x) const {
  Mat2 u = zphase(phases.at(0));
  const Mat2 r = reflection_signal(x);
  for (std::size_t k = 1; k < phases.size(); ++k) u = u * r * zphase(phases[k]);
  return u(0, 0);
}

PhaseSequence chebyshev_phases(int n) {
  if (n < 0) throw std::invalid_argument("degree must be >= 0");
  PhaseSequence ps;
  ps.target_degree = n;
  ps.parity = n % 2 ? Parity::odd : Parity::even;
  const double h = std::numbers::pi / 2;
  for (int k = 0; k < n; ++k) ps.phases.push_back(k % 2 ? -h : h);
  ps.phases.push_back(n % 2 ? -h : 0.0);
  double worst = 0.0;
  for (int j = 0; j <= 200; ++j) {
    const double x = -1.0 + j / 100.0;
    worst = std::max(worst, std::abs(ps.response(x) - chebyshev_t(n, x)));
  }
  ps.residual = worst;
  return ps;
}

double chebyshev_sup_norm(const std::vector<double>& c) {
  double worst = 0.0;
  const int samples = 2000;
  for (int j = 0; j <= samples; ++j) {
    const double x = std::cos(std::numbers::pi * j / samples);
    double s = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) s += c[n] * chebyshev_t(static_cast<int>(n), x);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

PhaseSequence qsp_phase_find(const std::vector<double>& coeffs, Parity parity) {
  const int want = parity == Parity::even ? 0 : 1;
  int degree = want;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    if (static_cast<int>(n % 2) != want) {
      if (std::abs(coeffs[n]) > 1e-14)
        throw std::invalid_argument("target polynomial does not have the declared parity");
    } else if (coeffs[n] != 0.0) {
      degree = std::max(degree, static_cast<int>(n));
    }
  }
  if (chebyshev_sup_norm(coeffs) > 1.0 - 1e-4)
    throw std::invalid_argument("target polynomial exceeds 1 - 1e-4 on [-1, 1]; rescale it");

  auto target = [&](double x) {
    double s = 0.0;
    for (std::size_t n = 0; n < coeffs.size(); ++n) s += coeffs[n] * chebyshev_t(static_cast<int>(n), x);
    return s;
  };

  PhaseSequence ps;
  ps.parity = parity;
  ps.target_degree = degree;
  const std::size_t n = static_cast<std::size_t>(degree);

  if (n == 0) {
    ps.phases = {std::acos(std::clamp(target(0.0), -1.0, 1.0))};
  } else {
    // Levenberg-Marquardt on Chebyshev nodes in (0, 1), Wx convention,
    // symmetric start.
    const int nodes = 2 * static_cast<int>(n) + 4;
    std::vector<double> xs(static_cast<std::size_t>(nodes)), fs(xs.size());
    for (int j = 0; j < nodes; ++j) {
      xs[j] = std::cos(std::numbers::pi * (2 * j + 1) / (4.0 * nodes));
      fs[j] = target(xs[j]);
    }
    std::vector<double> phi(n + 1, 0.0);
    phi.front() = phi.back() = std::numbers::pi / 4;

    auto residuals = [&](const std::vector<double>& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
      r.resize(nodes);
      if (jac) jac->resize(nodes, static_cast<Eigen::Index>(n + 1));
      std::vector<double> g;
      for (int j = 0; j < nodes; ++j) {
        r[j] = wx_response(p, xs[j], jac ? &g : nullptr) - fs[j];
        if (jac)
          for (std::size_t k = 0; k <= n; ++k) (*jac)(j, static_cast<Eigen::Index>(k)) = g[k];
      }
    };

    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    residuals(phi, r, &jac);
    double cost = r.squaredNorm();
    double mu = 1e-3;
    for (int iter = 0; iter < 500 && r.cwiseAbs().maxCoeff() > 1e-15; ++iter) {
      const Eigen::MatrixXd jtj = jac.transpose() * jac;
      const Eigen::VectorXd jtr = jac.transpose() * r;
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal().array() += mu * (1.0 + jtj.diagonal().array());
      const Eigen::VectorXd step = lhs.ldlt().solve(-jtr);
      std::vector<double> trial = phi;
      for (std::size_t k = 0; k <= n; ++k) trial[k] += step[static_cast<Eigen::Index>(k)];
      Eigen::VectorXd rt;
      residuals(trial, rt, nullptr);
      const double tcost = rt.squaredNorm();
      if (tcost < cost) {
        phi = std::move(trial);
        residuals(phi, r, &jac);
        cost = r.squaredNorm();
        mu = std::max(mu / 5.0, 1e-15);
      } else {
        mu *= 10.0;
        if (mu > 1e12) break;
      }
    }

    // Wx -> reflection convention: W = -i e^{i 3pi/4 Z} R e^{-i pi/4 Z}.
    const double pi = std::numbers::pi;
    ps.phases.resize(n + 1);
    ps.phases[0] = phi[0] + 3 * pi / 4;
    for (std::size_t k = 1; k < n; ++k) ps.phases[k] = phi[k] + pi / 2;
    ps.phases[n] = phi[n] - pi / 4 - static_cast<double>(n) * pi / 2;
  }

  double worst = 0.0;
  for (int j = 0; j <= 200; ++j) {
    const double x = -1.0 + j / 100.0;
    worst = std::max(worst, std::abs(ps.polynomial(x) - target(x)));
  }
  ps.residual = worst;
  if (!(worst <= 1e-8))
    throw PhaseFindingError("QSP phase finding did not converge (residual " +
                                std::to_string(worst) + ")",
                            worst);
  return ps;
}

// ---------------------------------------------------------------------------
// QSVT

QsvtCircuit::QsvtCircuit(const BlockEncoding& be, PhaseSequence phases)
    : be_(&be), phases_(std::move(phases)) {
  if (phases_.phases.empty()) throw std::invalid_argument("empty phase sequence");
}

void QsvtCircuit::apply_phase(ComplexVector& x, double phi) const {
  const int q = be_->n_system_qubits();
  const int m = be_->n_ancillas();
  const std::uint64_t anc_mask = ((std::uint64_t{1} << m) - 1) << q;
  const std::uint64_t sig_mask = std::uint64_t{1} << (q + m);
  const cd plus = std::polar(1.0, phi), minus = std::polar(1.0, -phi);
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(x.size()); ++i) {
    const bool reflect = (i & anc_mask) == 0;
    const bool negate = i & sig_mask;
    x[static_cast<Eigen::Index>(i)] *= (reflect != negate) ? plus : minus;
  }
}

void QsvtCircuit::apply_signal_hadamard(ComplexVector& x) const {
  hadamard(x, be_->n_system_qubits() + be_->n_ancillas());
}

void QsvtCircuit::apply(ComplexVector& x) const {
  const auto& ph = phases_.phases;
  apply_signal_hadamard(x);
  apply_phase(x, ph.back());
  // U and U^dagger alternate; the Pauli-LCU encoding is Hermitian, so both
  // are the same reflection.
  for (std::size_t k = ph.size() - 1; k-- > 0;) {
    be_->apply(x);
    apply_phase(x, ph[k]);
  }
  apply_signal_hadamard(x);
}

ComplexMatrix QsvtCircuit::matrix() const {
  return dense_from_action(n_qubits(), [&](ComplexVector& v) { apply(v); });
}

ComplexMatrix QsvtCircuit::block() const {
  return projected_block(be_->n_system_qubits(), n_qubits(), [&](ComplexVector& v) { apply(v); });
}

ComplexMatrix qsvt_apply(const BlockEncoding& be, const PhaseSequence& phases) {
  return QsvtCircuit(be, phases).matrix();
}

// ---------------------------------------------------------------------------
// HC^d circuit

namespace {

// Runs an LCU over `branches` on the register above a (1 + m + q)-qubit slab:
// PREP (weights), controlled branch circuits, PREP^dagger.
void run_lcu(ComplexVector& x, int slab_qubits, const std::vector<double>& weights,
             const std::vector<const QsvtCircuit*>& branches) {
  const int lcu_qubits = ceil_log2(weights.size());
  double total = 0.0;
  for (double w : weights) total += std::abs(w);
  Eigen::VectorXd amps = Eigen::VectorXd::Zero(Eigen::Index{1} << lcu_qubits);
  for (std::size_t k = 0; k < weights.size(); ++k)
    amps[static_cast<Eigen::Index>(k)] = std::sqrt(std::abs(weights[k]) / total);
  const Eigen::VectorXd hv = householder_to(amps);

  apply_householder(x, hv, slab_qubits, lcu_qubits);
  const Eigen::Index slab = Eigen::Index{1} << slab_qubits;
  for (std::size_t k = 0; k < branches.size(); ++k) {
    if (weights[k] == 0.0 || !branches[k]) continue;
    ComplexVector part = x.segment(static_cast<Eigen::Index>(k) * slab, slab);
    branches[k]->apply(part);
    if (weights[k] < 0) part = -part;
    x.segment(static_cast<Eigen::Index>(k) * slab, slab) = part;
  }
  apply_householder(x, hv, slab_qubits, lcu_qubits);
}

}  // namespace

CircuitResult assemble_hcvcc_circuit(const VccSystem& sys, const Eigen::VectorXd& t, int degree,
                                     CombineMode combine, UccMode ucc_mode,
                                     const std::vector<std::size_t>& ordering) {
  sys.check_amplitudes(t);
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  const int q = sys.space().n_spin_orbitals;
  if (q > kMaxCircuitQubits)
    throw std::invalid_argument("circuit emulation is limited to " +
                                std::to_string(kMaxCircuitQubits) + " system qubits");

  const ExcitationTable full_table(DeterminantBasis::full(q), sys.excitations());
  const SparseOperator tc = full_table.assemble(t);
  SparseOperator herm = 0.5 * (tc + SparseOperator(tc.transpose()));
  herm.prune(0.0);

  CircuitResult result{sys.reference(), 1.0, 0.0, 0, 0, 0.0, 0.0};
  if (herm.nonZeros() == 0) {
    result.state = apply_anti_hermitian_factor(sys, t, ucc_mode, ordering, sys.reference());
    return result;
  }

  const BlockEncoding be(pauli_decompose(herm));
  const double lambda = be.subnormalization();
  const int m = be.n_ancillas();
  result.lambda = lambda;
  result.n_ancillas = m;
  {
    const ComplexMatrix blk = be.block();
    const Eigen::MatrixXd target = Eigen::MatrixXd(herm) / lambda;
    result.block_residual = (blk - target.cast<cd>()).cwiseAbs().maxCoeff();
  }

  const std::vector<double> c = cheb_coeffs_exp(lambda, degree).c;
  const int slab_qubits = q + m + 1;
  std::vector<QsvtCircuit> circuits;
  std::vector<double> weights;

  if (combine == CombineMode::per_term) {
    circuits.reserve(c.size());
    for (std::size_t n = 0; n < c.size(); ++n) {
      circuits.emplace_back(be, chebyshev_phases(static_cast<int>(n)));
      weights.push_back(c[n]);
    }
  } else {
    std::vector<double> even(c.size(), 0.0), odd(c.size(), 0.0);
    for (std::size_t n = 0; n < c.size(); ++n) (n % 2 ? odd : even)[n] = c[n];
    circuits.reserve(2);
    for (auto [part, parity] : {std::pair{&even, Parity::even}, std::pair{&odd, Parity::odd}}) {
      const double sup = chebyshev_sup_norm(*part);
      if (sup == 0.0) {
        circuits.emplace_back(be, chebyshev_phases(parity == Parity::odd ? 1 : 0));
        weights.push_back(0.0);
        continue;
      }
      const double scale = sup / kQspTargetMax;
      std::vector<double> scaled(*part);
      for (double& v : scaled) v /= scale;
      auto phases = qsp_phase_find(scaled, parity);
      result.phase_residual = std::max(result.phase_residual, phases.residual * scale);
      circuits.emplace_back(be, std::move(phases));
      weights.push_back(scale);
    }
  }
  result.n_lcu_qubits = ceil_log2(weights.size());
  std::vector<const QsvtCircuit*> branches;
  for (const auto& circuit : circuits) branches.push_back(&circuit);

  const int total_qubits = slab_qubits + result.n_lcu_qubits;
  ComplexVector x = ComplexVector::Zero(Eigen::Index{1} << total_qubits);
  x[static_cast<Eigen::Index>(sys.space().reference)] = 1.0;
  run_lcu(x, slab_qubits, weights, branches);

  const ComplexVector projected = x.head(Eigen::Index{1} << q);
  const double imag = projected.imag().cwiseAbs().maxCoeff();
  if (imag > 1e-9 * std::max(1e-300, projected.cwiseAbs().maxCoeff()))
    throw std::runtime_error("projected circuit state has an imaginary component");
  const StateVector full_state = projected.real();
  StateVector state = sys.basis().is_full() ? full_state : sys.basis().restrict(full_state);
  result.success_amplitude = full_state.norm();
  if (result.success_amplitude < 1e-10)
    throw std::runtime_error("post-selection success amplitude below 1e-10");
  if (std::abs(state.norm() - result.success_amplitude) > 1e-9 * result.success_amplitude)
    throw std::runtime_error("projected circuit state leaks out of the reference sector");
  state = apply_anti_hermitian_factor(sys, t, ucc_mode, ordering, state);
  result.state = state / state.norm();
  return result;
}

}  // namespace vcc
