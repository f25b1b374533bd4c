#include "quasient/freefermion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>

namespace quasient::freefermion {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr std::complex<double> kImag{0.0, 1.0};

// Site reflection j -> n+1-j lifted to Majorana indices. The Jordan-Wigner
// string makes this a signed permutation S with S^2 = -1:
//   e_{2j}   -> +e_{2m+1},   e_{2j+1} -> -e_{2m},   m = n-1-j (0-based),
// so iS is Hermitian and unitary with eigenvalues +-1, and commutes with iA
// whenever the spin Hamiltonian is reflection invariant.
struct MajoranaReflection {
  std::vector<int> target;
  std::vector<double> sign;

  explicit MajoranaReflection(int n) : target(2 * n), sign(2 * n) {
    for (int j = 0; j < n; ++j) {
      const int m = n - 1 - j;
      target[2 * j] = 2 * m + 1;
      sign[2 * j] = 1.0;
      target[2 * j + 1] = 2 * m;
      sign[2 * j + 1] = -1.0;
    }
  }

  // (S A): row c of A moves to row target[c] with sign[c].
  MatrixXd left_apply(const MatrixXd& A) const {
    MatrixXd out(A.rows(), A.cols());
    for (int c = 0; c < A.rows(); ++c) out.row(target[c]) = sign[c] * A.row(c);
    return out;
  }

  // (A S): column d of S is sign[d] e_{target[d]}, so (AS).col(d) = sign[d] A.col(target[d]).
  MatrixXd right_apply(const MatrixXd& A) const {
    MatrixXd out(A.rows(), A.cols());
    for (int d = 0; d < A.cols(); ++d) out.col(d) = sign[d] * A.col(target[d]);
    return out;
  }

  // iS v for a complex vector.
  VectorXcd apply_is(const VectorXcd& v) const {
    VectorXcd out(v.size());
    for (int c = 0; c < v.size(); ++c) out(target[c]) = kImag * sign[c] * v(c);
    return out;
  }
};

// Sign of det(M) for a matrix known to be orthogonal, via LU.
double orthogonal_det_sign(const MatrixXd& M) {
  Eigen::PartialPivLU<MatrixXd> lu(M);
  double s = static_cast<double>(lu.permutationP().determinant());
  const auto& diag = lu.matrixLU().diagonal();
  for (int i = 0; i < diag.size(); ++i) s *= (diag(i) < 0.0) ? -1.0 : 1.0;
  return s;
}

// Deterministic phase: rotate so the largest-magnitude entry is real positive.
void fix_column_phase(Eigen::Ref<VectorXcd> v) {
  int imax = 0;
  double amax = -1.0;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::norm(v(i));
    if (a > amax * (1.0 + 1e-12)) {
      amax = a;
      imax = i;
    }
  }
  const std::complex<double> z = v(imax);
  if (std::abs(z) > 0.0) v *= std::conj(z) / std::abs(z);
}

}  // namespace

double pair_entropy(double nu) {
  const double p = 0.5 * (1.0 + nu);
  const double q = 1.0 - p;
  double s = 0.0;
  if (p > 0.0) s -= p * std::log(p);
  if (q > 0.0) s -= q * std::log(q);
  return s;
}

QuasiparticleBasis diagonalize(const model::MajoranaQuadraticForm& form) {
  form.validate();
  const int n = form.n;
  const MatrixXd& A = form.A;

  // Eigenpairs of the Hermitian iA from the real symmetric -A^2 = A^T A:
  // each +-eps pair of iA spans a 2-dim real invariant subspace of -A^2.
  const MatrixXd M = -(A * A).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
  if (es.info() != Eigen::Success)
    throw NumericalError("diagonalize: eigensolver failed on -A^2");
  const VectorXd mu = es.eigenvalues();
  const MatrixXd& Q = es.eigenvectors();
  const MatrixXd AQ = A * Q;

  VectorXd eps_half(2 * n);  // sqrt(mu), the eigenvalue magnitudes of iA
  for (int i = 0; i < 2 * n; ++i) eps_half(i) = std::sqrt(std::max(mu(i), 0.0));
  const double scale = eps_half(2 * n - 1);
  const double cluster_tol = std::max(1e-10 * scale, 1e-14);
  // The sqrt amplifies eigensolver noise near zero (mu ~ eps_machine maps to
  // eps_half ~ 1e-8), so the zero-mode threshold sits well above that.
  const double zero_tol = std::max(1e-7 * scale, 1e-13);

  MajoranaReflection refl(n);
  const double comm_norm =
      (refl.left_apply(A) - refl.right_apply(A)).cwiseAbs().maxCoeff();
  const double a_norm = std::max(A.cwiseAbs().maxCoeff(), 1e-300);
  const bool reflection_symmetric = comm_norm <= 1e-10 * a_norm;

  QuasiparticleBasis basis;
  basis.n = n;
  basis.V.resize(2 * n, n);
  basis.epsilon.resize(n);
  basis.reflection_parity.assign(n, 0);
  basis.momentum.resize(n);
  std::vector<double> refl_sign(n, 0.0);

  int mode = 0;
  // Near-zero modes first: pair real vectors into isotropic complex columns.
  int zero_count = 0;
  while (zero_count < 2 * n && eps_half(zero_count) <= zero_tol) ++zero_count;
  if (zero_count % 2 != 0)
    throw NumericalError("diagonalize: odd number of near-zero eigenvalues");
  for (int a = 0; a < zero_count / 2; ++a) {
    basis.V.col(mode) = (Q.col(2 * a).cast<std::complex<double>>() +
                         kImag * Q.col(2 * a + 1)) /
                        std::numbers::sqrt2;
    basis.epsilon(mode) = 0.0;
    basis.near_zero_modes.push_back(mode);
    ++mode;
  }

  int i = zero_count;
  while (i < 2 * n) {
    int j = i + 1;
    while (j < 2 * n && eps_half(j) - eps_half(i) <= cluster_tol) ++j;
    const int width = j - i;  // 2m real vectors -> m modes
    if (width % 2 != 0)
      throw NumericalError("diagonalize: odd eigenvalue cluster of -A^2");
    const int m = width / 2;

    // Small antisymmetric block B_c = Q_c^T A Q_c; iB_c is Hermitian with
    // eigenvalues +-eps; take the positive half.
    const MatrixXd Bc = Q.middleCols(i, width).transpose() * AQ.middleCols(i, width);
    const MatrixXcd Hc = kImag * Bc;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> hes(0.5 * (Hc + Hc.adjoint()));
    if (hes.info() != Eigen::Success)
      throw NumericalError("diagonalize: cluster eigensolver failed");
    MatrixXcd Vc(2 * n, m);
    for (int a = 0; a < m; ++a) {
      // ascending eigenvalues: the last m are the positive ones
      Vc.col(a) = Q.middleCols(i, width) * hes.eigenvectors().col(width - m + a);
      basis.epsilon(mode + a) = 4.0 * hes.eigenvalues()(width - m + a);
    }
    // Reflection-adapt degenerate clusters: diagonalize iS inside the
    // positive-energy eigenspace.
    if (reflection_symmetric) {
      MatrixXcd ISV(2 * n, m);
      for (int a = 0; a < m; ++a) ISV.col(a) = refl.apply_is(Vc.col(a));
      const MatrixXcd W = Vc.adjoint() * ISV;
      if (m == 1) {
        const double s = W(0, 0).real();
        if (std::abs(std::abs(s) - 1.0) < 1e-6) refl_sign[mode] = (s > 0) ? 1.0 : -1.0;
      } else {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> wes(0.5 * (W + W.adjoint()));
        Vc = (Vc * wes.eigenvectors()).eval();
        for (int a = 0; a < m; ++a) {
          const double s = wes.eigenvalues()(a);
          if (std::abs(std::abs(s) - 1.0) < 1e-6) refl_sign[mode + a] = (s > 0) ? 1.0 : -1.0;
        }
      }
    }
    for (int a = 0; a < m; ++a) basis.V.col(mode + a) = Vc.col(a);
    mode += m;
    i = j;
  }
  if (mode != n) throw NumericalError("diagonalize: mode count mismatch");

  for (int k = 0; k < n; ++k) fix_column_phase(basis.V.col(k));

  // Vacuum parity (-1)^n det(O), with O the real orthogonal Bogoliubov
  // rotation whose row pairs are sqrt(2) (Re v_k, Im v_k).
  MatrixXd O(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    O.row(2 * k) = std::numbers::sqrt2 * basis.V.col(k).real().transpose();
    O.row(2 * k + 1) = std::numbers::sqrt2 * basis.V.col(k).imag().transpose();
  }
  double det_sign = orthogonal_det_sign(O);
  basis.ground_parity = ((n % 2 == 0) ? 1 : -1) * ((det_sign > 0) ? 1 : -1);
  // With an unresolved zero mode the vacuum parity is a convention (creating
  // the zero quasiparticle swaps the sectors at no energy cost). Pin it to
  // +1, the even-parity ground state of the adjacent resolvable regime, by
  // conjugating the first flagged column; labels then stay consistent in n.
  if (!basis.near_zero_modes.empty() && basis.ground_parity < 0) {
    const int z = basis.near_zero_modes.front();
    basis.V.col(z) = basis.V.col(z).conjugate();
    fix_column_phase(basis.V.col(z));
    basis.ground_parity = 1;
  }
  basis.ground_energy = -0.5 * basis.epsilon.sum();

  // Excited-state reflection labels: R b+_k R = -p_vac (iS-eigenvalue) b+_k
  // on the vacuum, so the per-mode label is -p_vac * s_k.
  for (int k = 0; k < n; ++k) {
    if (refl_sign[k] != 0.0)
      basis.reflection_parity[k] =
          (refl_sign[k] > 0 ? -1 : 1) * basis.ground_parity;
  }

  // Open-chain momentum labels in energy order; metadata only.
  for (int k = 0; k < n; ++k)
    basis.momentum(k) = std::numbers::pi * (k + 1) / (n + 1.0);

  return basis;
}

CorrelationMatrix correlation_ground(const QuasiparticleBasis& basis, int L) {
  if (L < 1 || L > basis.n)
    throw ConfigError("correlation_ground: L must satisfy 1 <= L <= n");
  const MatrixXcd u = basis.V.topRows(2 * L);
  const MatrixXd G = (u * u.adjoint()).imag();
  CorrelationMatrix corr;
  corr.Gamma = G - G.transpose();  // = 2 Im(u u^H), exactly antisymmetric
  corr.L = L;
  corr.source = "ground";
  return corr;
}

Eigen::MatrixXd chi(const QuasiparticleBasis& basis, int k, int L) {
  if (k < 0 || k >= basis.n) throw ConfigError("chi: mode index out of range");
  if (L < 1 || L > basis.n) throw ConfigError("chi: L must satisfy 1 <= L <= n");
  const VectorXcd uk = basis.V.col(k).head(2 * L);
  const MatrixXd X = (uk * uk.adjoint()).imag();
  return 2.0 * (X - X.transpose());  // 4 Im(u_k u_k^H)
}

CorrelationMatrix correlation_excited(const QuasiparticleBasis& basis,
                                      const ExcitationSpec& spec, int L) {
  std::set<int> seen;
  for (int k : spec.occupied) {
    if (k < 0 || k >= basis.n)
      throw ConfigError("correlation_excited: mode index out of range");
    if (!seen.insert(k).second)
      throw ConfigError("correlation_excited: duplicate mode index " + std::to_string(k));
  }
  CorrelationMatrix corr = correlation_ground(basis, L);
  for (int k : spec.occupied) corr.Gamma -= chi(basis, k, L);
  std::string src = "modes={";
  bool first = true;
  for (int k : spec.occupied) {
    if (!first) src += ",";
    src += std::to_string(k);
    first = false;
  }
  corr.source = src + "}";
  return corr;
}

namespace {

// Largest Schmidt probabilities prod_j (1 + m_j nu_j)/2, enumerated from the
// largest down by flipping factors in order of decreasing ratio
// (1-nu)/(1+nu). Nodes carry the log-product with and without their last
// flip so ties and zero ratios stay well defined.
std::vector<double> largest_schmidt_probs(const VectorXd& nu, std::size_t max_count,
                                          double cum_target) {
  const int L = static_cast<int>(nu.size());
  double logp0 = 0.0;
  std::vector<double> logr(L);
  for (int j = 0; j < L; ++j) {
    const double p = 0.5 * (1.0 + nu(j));
    const double q = 1.0 - p;
    logp0 += std::log(p);
    logr[j] = (q > 0.0) ? std::log(q) - std::log(p) : -std::numeric_limits<double>::infinity();
  }
  std::sort(logr.begin(), logr.end(), std::greater<double>());

  struct Node {
    double logp, logp_base;
    int last;
    bool operator<(const Node& o) const { return logp < o.logp; }
  };
  std::priority_queue<Node> heap;

  std::vector<double> out;
  out.reserve(std::min<std::size_t>(max_count, 1024));
  const double p0 = std::exp(logp0);
  out.push_back(p0);
  double cum = p0;
  if (L > 0 && std::isfinite(logr[0])) heap.push({logp0 + logr[0], logp0, 0});

  while (out.size() < max_count && cum < cum_target && !heap.empty()) {
    const Node node = heap.top();
    heap.pop();
    const double p = std::exp(node.logp);
    out.push_back(p);
    cum += p;
    const int next = node.last + 1;
    if (next < L && std::isfinite(logr[next])) {
      heap.push({node.logp + logr[next], node.logp, next});
      heap.push({node.logp_base + logr[next], node.logp_base, next});
    }
  }
  return out;
}

}  // namespace

EntanglementSpectrum spectrum_from_gamma(const CorrelationMatrix& corr,
                                         const SpectrumOptions& opt) {
  const int twoL = static_cast<int>(corr.Gamma.rows());
  if (twoL != corr.Gamma.cols() || twoL != 2 * corr.L || corr.L < 1)
    throw ConfigError("spectrum_from_gamma: malformed correlation matrix");

  const MatrixXcd iG = kImag * corr.Gamma;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(iG, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("spectrum_from_gamma: eigensolver failed");
  const VectorXd ev = es.eigenvalues();  // ascending, symmetric +-nu

  constexpr double clamp_tol = 1e-9;
  if (ev(twoL - 1) > 1.0 + clamp_tol || ev(0) < -1.0 - clamp_tol)
    throw PhysicalityError("spectrum_from_gamma: pairing eigenvalue outside [-1,1] by " +
                           std::to_string(std::max(ev(twoL - 1) - 1.0, -1.0 - ev(0))));

  EntanglementSpectrum spec;
  spec.nu.resize(corr.L);
  for (int j = 0; j < corr.L; ++j) {
    double nu = ev(twoL - 1 - j);  // nonnegative half, descending
    if (nu < -clamp_tol)
      throw PhysicalityError("spectrum_from_gamma: +- pairing violated");
    spec.nu(j) = std::clamp(nu, 0.0, 1.0);
  }
  spec.entropy = 0.0;
  for (int j = 0; j < corr.L; ++j) spec.entropy += pair_entropy(spec.nu(j));

  if (opt.with_schmidt_probs)
    spec.schmidt_probs = largest_schmidt_probs(spec.nu, opt.max_probs, opt.prob_cum_target);
  return spec;
}

double excess_entropy(const QuasiparticleBasis& basis, const ExcitationSpec& spec,
                      int L) {
  if (L < 0) L = basis.n / 2;
  const double s0 = spectrum_from_gamma(correlation_ground(basis, L)).entropy;
  if (spec.occupied.empty()) return 0.0;
  const double s1 = spectrum_from_gamma(correlation_excited(basis, spec, L)).entropy;
  return s1 - s0;
}

double excess_entropy(const model::MajoranaQuadraticForm& form,
                      const ExcitationSpec& spec, int L) {
  return excess_entropy(diagonalize(form), spec, L);
}

double half_chain_mode_weight(const QuasiparticleBasis& basis, int k, int L) {
  if (k < 0 || k >= basis.n)
    throw ConfigError("half_chain_mode_weight: mode index out of range");
  if (L < 1 || L > basis.n)
    throw ConfigError("half_chain_mode_weight: L must satisfy 1 <= L <= n");
  const MatrixXcd u = basis.V.topRows(2 * L);
  const VectorXcd t = u.transpose() * basis.V.col(k).head(2 * L);
  return t.squaredNorm();
}

int kernel_dimension(const CorrelationMatrix& corr, double tol) {
  const MatrixXcd iG = kImag * corr.Gamma;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(iG, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("kernel_dimension: eigensolver failed");
  int count = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) < tol) ++count;
  return count;
}

}  // namespace quasient::freefermion
