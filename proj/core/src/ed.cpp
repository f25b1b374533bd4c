#include "quasient/ed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "quasient/detail/random.hpp"

namespace quasient::ed {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using MatVec = std::function<void(const VectorXd&, VectorXd&)>;

double gershgorin_norm(const SpMat& H) {
  VectorXd rowsum = VectorXd::Zero(H.rows());
  for (int k = 0; k < H.outerSize(); ++k)
    for (SpMat::InnerIterator it(H, k); it; ++it) rowsum(it.row()) += std::abs(it.value());
  return std::max(rowsum.maxCoeff(), 1e-300);
}

// Deterministic overall phase and, for real vectors, sign.
void fix_phase(VectorXcd& v) {
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

// ---------------------------------------------------------------------------
// Lanczos with full reorthogonalization. Robust at 2^16 scale; basis stored
// densely, tridiagonal Rayleigh-Ritz every chunk, happy breakdowns restart
// with a fresh random vector orthogonal to the current basis.
// ---------------------------------------------------------------------------

struct LanczosOut {
  VectorXd evals;
  MatrixXd evecs;
  VectorXd residuals;
};

LanczosOut lanczos_lowest(const MatVec& matvec, int dim, int nev, double scale,
                          double tol, int max_basis, std::uint64_t seed) {
  nev = std::min(nev, dim);
  if (max_basis <= 0) max_basis = std::min(dim, std::max(8 * nev + 120, 400));
  max_basis = std::max(max_basis, std::min(dim, nev + 2));

  detail::Gaussian gauss(seed);
  MatrixXd Q(dim, max_basis);
  std::vector<double> alpha;  // alpha[j] = <q_j|H|q_j>, one per completed step
  std::vector<double> beta;   // beta[j] couples q_j and q_{j+1}

  auto random_orthonormal = [&](int m) -> bool {
    for (int attempt = 0; attempt < 5; ++attempt) {
      VectorXd v(dim);
      for (int i = 0; i < dim; ++i) v(i) = gauss();
      for (int pass = 0; pass < 2; ++pass)
        if (m > 0) v -= Q.leftCols(m) * (Q.leftCols(m).transpose() * v).eval();
      const double nrm = v.norm();
      if (nrm > 1e-8) {
        Q.col(m) = v / nrm;
        return true;
      }
    }
    return false;
  };

  if (!random_orthonormal(0))
    throw ConvergenceError("lanczos: could not build a start vector");

  VectorXd w(dim);
  const int chunk = 24;
  bool space_exhausted = false;

  while (true) {
    // one Lanczos step on the latest basis vector
    const int mk = static_cast<int>(alpha.size());  // completed steps so far
    matvec(Q.col(mk), w);
    alpha.push_back(Q.col(mk).dot(w));
    w -= alpha.back() * Q.col(mk);
    if (mk >= 1) w -= beta[mk - 1] * Q.col(mk - 1);
    for (int pass = 0; pass < 2; ++pass)
      w -= Q.leftCols(mk + 1) * (Q.leftCols(mk + 1).transpose() * w).eval();
    const double b = w.norm();

    const int steps = mk + 1;
    bool at_cap = steps >= max_basis || steps >= dim;
    if (!at_cap) {
      if (b <= 1e-13 * scale) {
        // invariant subspace exhausted; restart orthogonal to the basis
        beta.push_back(0.0);
        if (!random_orthonormal(steps)) {
          space_exhausted = true;
          at_cap = true;
        }
      } else {
        beta.push_back(b);
        Q.col(steps) = w / b;
      }
    }

    if (!(at_cap || steps % chunk == 0)) continue;

    // Rayleigh-Ritz on the completed basis
    MatrixXd T = MatrixXd::Zero(steps, steps);
    for (int j = 0; j < steps; ++j) {
      T(j, j) = alpha[j];
      if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
    const VectorXd& theta = es.eigenvalues();
    const MatrixXd& y = es.eigenvectors();

    const double bout = (beta.size() >= static_cast<size_t>(steps)) ? beta[steps - 1] : b;
    const int want = std::min(nev, steps);
    bool converged = steps >= nev;
    if (converged) {
      for (int i = 0; i < want; ++i) {
        if (std::abs(bout * y(steps - 1, i)) > tol * scale) {
          converged = false;
          break;
        }
      }
    }
    if (space_exhausted || steps >= dim) converged = true;

    if (converged || at_cap) {
      LanczosOut out;
      const int got = want;
      out.evals = theta.head(got);
      out.evecs = Q.leftCols(steps) * y.leftCols(got);
      out.residuals.resize(got);
      VectorXd hv(dim);
      for (int i = 0; i < got; ++i) {
        VectorXd v = out.evecs.col(i);
        v.normalize();
        out.evecs.col(i) = v;
        matvec(v, hv);
        out.residuals(i) = (hv - out.evals(i) * v).norm();
      }
      const double worst = out.residuals.maxCoeff();
      if (worst > tol * scale) {
        std::ostringstream os;
        os << "lanczos: not converged within basis cap " << max_basis
           << "; worst residual " << worst << " (tolerance " << tol * scale << ")";
        throw ConvergenceError(os.str());
      }
      return out;
    }
  }
}

// ---------------------------------------------------------------------------
// Symmetry sectors. Basis vectors are orbit combinations |m> +- |rev(m)>,
// optionally filtered by the parity of popcount(m). The sector matvec embeds
// into the full space, applies the sparse H once and projects back.
// ---------------------------------------------------------------------------

struct Sector {
  // orbit representatives: single (self-reflective) or paired
  std::vector<int> idx1, idx2;  // idx2 = -1 for singles
  std::vector<double> coef2;    // +-1/sqrt(2) for pairs, 0 for singles
  int dim() const { return static_cast<int>(idx1.size()); }
};

void sector_matvec(const SpMat& H, const Sector& s, VectorXd& full_in,
                   VectorXd& full_out, const VectorXd& x, VectorXd& y) {
  full_in.setZero();
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (int i = 0; i < s.dim(); ++i) {
    if (s.idx2[i] < 0) {
      full_in(s.idx1[i]) = x(i);
    } else {
      full_in(s.idx1[i]) = inv_sqrt2 * x(i);
      full_in(s.idx2[i]) = s.coef2[i] * inv_sqrt2 * x(i);
    }
  }
  full_out.noalias() = H * full_in;
  for (int i = 0; i < s.dim(); ++i) {
    if (s.idx2[i] < 0)
      y(i) = full_out(s.idx1[i]);
    else
      y(i) = inv_sqrt2 * (full_out(s.idx1[i]) + s.coef2[i] * full_out(s.idx2[i]));
  }
}

VectorXd sector_embed(const Sector& s, const VectorXd& x, int dim) {
  VectorXd full = VectorXd::Zero(dim);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (int i = 0; i < s.dim(); ++i) {
    if (s.idx2[i] < 0)
      full(s.idx1[i]) = x(i);
    else {
      full(s.idx1[i]) = inv_sqrt2 * x(i);
      full(s.idx2[i]) = s.coef2[i] * inv_sqrt2 * x(i);
    }
  }
  return full;
}

// Probabilistic commutation check on a few random vectors.
bool commutes_with(const SpMat& H, const std::function<void(const VectorXd&, VectorXd&)>& Sop,
                   int dim, double scale) {
  detail::Gaussian gauss(0xc0117e57ull);
  VectorXd v(dim), sv(dim), hv(dim), hsv(dim), shv(dim);
  for (int trial = 0; trial < 3; ++trial) {
    for (int i = 0; i < dim; ++i) v(i) = gauss();
    v.normalize();
    Sop(v, sv);
    hsv.noalias() = H * sv;
    hv.noalias() = H * v;
    Sop(hv, shv);
    if ((hsv - shv).norm() > 1e-10 * scale) return false;
  }
  return true;
}

std::vector<Sector> build_sectors(int n, bool use_parity) {
  const int dim = 1 << n;
  std::vector<Sector> sectors(use_parity ? 4 : 2);
  // sector index: bit0 = reflection (0:+, 1:-), bit1 = parity (0:+, 1:-)
  for (int m = 0; m < dim; ++m) {
    const int r = model::reflect_basis_index(m, n);
    if (r < m) continue;  // orbit handled at its representative
    const int pbit = use_parity ? (std::popcount(static_cast<unsigned>(m)) & 1) : 0;
    if (r == m) {
      sectors[pbit << 1].idx1.push_back(m);
      sectors[pbit << 1].idx2.push_back(-1);
      sectors[pbit << 1].coef2.push_back(0.0);
    } else {
      for (int sgn = 0; sgn < 2; ++sgn) {
        auto& sec = sectors[(pbit << 1) | sgn];
        sec.idx1.push_back(m);
        sec.idx2.push_back(r);
        sec.coef2.push_back(sgn == 0 ? 1.0 : -1.0);
      }
    }
  }
  return sectors;
}

struct Candidate {
  double energy;
  VectorXd vec;  // full-space, real
  double residual;
};

std::vector<Candidate> solve_sparse(const model::SpinHamiltonianMatrix& Hm, int M,
                                    const SolveOptions& opt) {
  const SpMat& H = Hm.H;
  const int n = Hm.n;
  const int dim = 1 << n;
  const double scale = gershgorin_norm(H);

  auto reflect_op = [&](const VectorXd& x, VectorXd& y) {
    y.resize(dim);
    for (int m = 0; m < dim; ++m) y(model::reflect_basis_index(m, n)) = x(m);
  };
  const bool use_reflection = commutes_with(H, reflect_op, dim, scale);

  auto parity_op = [&](const VectorXd& x, VectorXd& y) {
    y.resize(dim);
    for (int m = 0; m < dim; ++m)
      y(m) = (std::popcount(static_cast<unsigned>(m)) & 1) ? -x(m) : x(m);
  };
  const bool use_parity = use_reflection && commutes_with(H, parity_op, dim, scale);

  std::vector<Candidate> all;
  int extra = 6;
  for (int attempt = 0; attempt < 3; ++attempt) {
    all.clear();
    if (use_reflection) {
      auto sectors = build_sectors(n, use_parity);
      int sector_id = 0;
      for (const auto& sec : sectors) {
        ++sector_id;
        if (sec.dim() == 0) continue;
        const int nev = std::min(sec.dim(), M + extra);
        VectorXd full_in(dim), full_out(dim);
        MatVec mv = [&](const VectorXd& x, VectorXd& y) {
          sector_matvec(H, sec, full_in, full_out, x, y);
        };
        auto out = lanczos_lowest(mv, sec.dim(), nev, scale, 1e-10,
                                  opt.max_basis, opt.seed + sector_id);
        for (int i = 0; i < out.evals.size(); ++i)
          all.push_back({out.evals(i), sector_embed(sec, out.evecs.col(i), dim),
                         out.residuals(i)});
      }
    } else {
      MatVec mv = [&](const VectorXd& x, VectorXd& y) { y.noalias() = H * x; };
      auto out = lanczos_lowest(mv, dim, std::min(dim, M + extra), scale, 1e-10,
                                opt.max_basis, opt.seed);
      for (int i = 0; i < out.evals.size(); ++i)
        all.push_back({out.evals(i), out.evecs.col(i), out.residuals(i)});
    }
    std::sort(all.begin(), all.end(),
              [](const Candidate& a, const Candidate& b) { return a.energy < b.energy; });

    // Cluster-safe cut: make sure the M-th state is not inside a cluster that
    // extends past what we computed.
    const double escale = std::max(std::abs(all.front().energy), std::abs(all.back().energy));
    const double ctol = 1e-9 * std::max(escale, 1.0);
    size_t cut = std::min<size_t>(M, all.size());
    while (cut < all.size() && cut > 0 &&
           std::abs(all[cut].energy - all[cut - 1].energy) < ctol)
      ++cut;
    const bool boundary_ok = cut < all.size() || all.size() <= static_cast<size_t>(M);
    if (boundary_ok) {
      all.resize(cut);
      return all;
    }
    extra *= 3;  // cluster may continue past the computed window; widen
  }
  throw ConvergenceError("lowest_eigenstates: could not close a degenerate cluster");
}

std::vector<Candidate> solve_dense(const model::SpinHamiltonianMatrix& Hm, int M) {
  const int dim = 1 << Hm.n;
  MatrixXd Hd = MatrixXd(Hm.H);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(Hd);
  if (es.info() != Eigen::Success)
    throw NumericalError("lowest_eigenstates: dense eigensolver failed");
  const double escale = std::max(std::abs(es.eigenvalues()(0)),
                                 std::abs(es.eigenvalues()(dim - 1)));
  const double ctol = 1e-9 * std::max(escale, 1.0);
  int cut = std::min(M, dim);
  while (cut < dim && cut > 0 &&
         std::abs(es.eigenvalues()(cut) - es.eigenvalues()(cut - 1)) < ctol)
    ++cut;
  std::vector<Candidate> out;
  out.reserve(cut);
  VectorXd hv(dim);
  for (int i = 0; i < cut; ++i) {
    hv.noalias() = Hd * es.eigenvectors().col(i);
    out.push_back({es.eigenvalues()(i), es.eigenvectors().col(i),
                   (hv - es.eigenvalues()(i) * es.eigenvectors().col(i)).norm()});
  }
  return out;
}

}  // namespace

std::vector<EigenState> lowest_eigenstates(const model::SpinHamiltonianMatrix& H,
                                           int M, const SolveOptions& opt) {
  if (M < 1 || M > 64)
    throw ConfigError("lowest_eigenstates: M must be in [1, 64]");
  if (H.n < 1 || H.n > 16)
    throw SizeCapError("lowest_eigenstates: n must be in [1, 16]");

  std::vector<Candidate> cands =
      (H.n < 12) ? solve_dense(H, M) : solve_sparse(H, M, opt);

  const double scale = gershgorin_norm(H.H);
  std::vector<EigenState> states;
  states.reserve(cands.size());
  for (auto& c : cands) {
    if (c.residual > opt.residual_tol * scale) {
      std::ostringstream os;
      os << "lowest_eigenstates: residual " << c.residual << " at E = " << c.energy
         << " exceeds " << opt.residual_tol * scale;
      throw ConvergenceError(os.str());
    }
    EigenState s;
    s.vector = c.vec.cast<std::complex<double>>();
    s.vector.normalize();
    fix_phase(s.vector);
    s.energy = c.energy;
    states.push_back(std::move(s));
  }
  return states;
}

std::vector<EigenState> symmetry_rotate(std::vector<EigenState> states,
                                        const Eigen::SparseMatrix<double>& R,
                                        const Eigen::SparseMatrix<double>* P) {
  if (states.empty()) return states;
  double escale = 1.0;
  for (const auto& s : states) escale = std::max(escale, std::abs(s.energy));
  const double ctol = 1e-9 * escale;
  const double rtol = 1e-8;

  // Diagonalizes op inside states[lo, hi); returns per-state labels, or
  // leaves them unresolved if the cluster does not close under op.
  auto rotate_block = [&](size_t lo, size_t hi, const Eigen::SparseMatrix<double>& op,
                          std::vector<std::optional<int>>& labels) {
    const size_t m = hi - lo;
    MatrixXcd X(states[lo].vector.size(), m);
    for (size_t i = 0; i < m; ++i) X.col(i) = states[lo + i].vector;
    MatrixXcd OX = op.cast<std::complex<double>>() * X;
    MatrixXcd W = X.adjoint() * OX;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (W + W.adjoint()));
    // order +1 block first, then -1
    std::vector<int> order(m);
    for (size_t i = 0; i < m; ++i) order[i] = static_cast<int>(m - 1 - i);
    MatrixXcd Xr(X.rows(), m);
    for (size_t i = 0; i < m; ++i) Xr.col(i) = X * es.eigenvectors().col(order[i]);
    for (size_t i = 0; i < m; ++i) {
      VectorXcd v = Xr.col(i);
      fix_phase(v);
      const double lam = es.eigenvalues()(order[i]);
      VectorXcd ov = op.cast<std::complex<double>>() * v;
      const int lab = lam >= 0 ? 1 : -1;
      if (std::abs(lam - lab) < 1e-6 && (ov - static_cast<double>(lab) * v).norm() <= rtol) {
        states[lo + i].vector = v;
        labels[lo + i] = lab;
      } else {
        labels[lo + i] = std::nullopt;  // not a symmetry eigenstate; flagged
      }
    }
  };

  std::vector<std::optional<int>> rlab(states.size()), plab(states.size());
  size_t i = 0;
  while (i < states.size()) {
    size_t j = i + 1;
    while (j < states.size() && std::abs(states[j].energy - states[j - 1].energy) < ctol)
      ++j;
    rotate_block(i, j, R, rlab);
    i = j;
  }
  if (P) {
    // P commutes with R for our models; rotate inside (cluster, R label) blocks.
    i = 0;
    while (i < states.size()) {
      size_t j = i + 1;
      while (j < states.size() && std::abs(states[j].energy - states[j - 1].energy) < ctol)
        ++j;
      for (int rl : {1, -1}) {
        std::vector<size_t> members;
        for (size_t k = i; k < j; ++k)
          if (rlab[k].has_value() && *rlab[k] == rl) members.push_back(k);
        if (members.empty()) continue;
        // rotate_block orders +1 before -1, so resolved members are contiguous
        const bool contiguous = members.back() - members.front() + 1 == members.size();
        if (contiguous) rotate_block(members.front(), members.back() + 1, *P, plab);
      }
      i = j;
    }
  }

  for (size_t k = 0; k < states.size(); ++k) {
    states[k].reflection_eig = rlab[k];
    states[k].parity_eig = P ? plab[k] : std::nullopt;
  }
  return states;
}

SchmidtData schmidt_spectrum(const EigenState& state, int cut) {
  const auto dim = state.vector.size();
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim)
    throw ConfigError("schmidt_spectrum: state length is not a power of two");
  if (cut < 0) cut = n / 2;
  if (cut < 1 || cut >= n)
    throw ConfigError("schmidt_spectrum: cut must satisfy 1 <= cut < n");

  const int rows = 1 << cut;
  const int cols = 1 << (n - cut);
  Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      psi(state.vector.data(), rows, cols);
  Eigen::BDCSVD<MatrixXcd> svd(psi);
  SchmidtData out;
  out.singular_values = svd.singularValues();
  out.cut = cut;
  const double total = out.singular_values.squaredNorm();
  if (std::abs(total - 1.0) > 1e-10)
    throw PhysicalityError("schmidt_spectrum: state norm deviates from 1 by " +
                           std::to_string(std::abs(total - 1.0)));
  out.entropy = 0.0;
  for (int k = 0; k < out.singular_values.size(); ++k) {
    const double p = out.singular_values(k) * out.singular_values(k);
    if (p > 0.0) out.entropy -= p * std::log(p);
  }
  return out;
}

std::vector<ExcessRow> excess_table(const model::SpinChainModel& m, int M,
                                    const SolveOptions& opt) {
  const auto H = model::build_spin_matrix(m);
  auto states = lowest_eigenstates(H, M, opt);
  const auto R = model::reflection_matrix(m.n);
  if (m.is_xy()) {
    const auto P = model::parity_matrix(m.n);
    states = symmetry_rotate(std::move(states), R, &P);
  } else {
    states = symmetry_rotate(std::move(states), R, nullptr);
  }

  std::vector<ExcessRow> rows;
  rows.reserve(states.size());
  double s_ground = 0.0;
  for (size_t i = 0; i < states.size(); ++i) {
    const auto sd = schmidt_spectrum(states[i]);
    if (i == 0) s_ground = sd.entropy;
    rows.push_back({states[i].energy, states[i].reflection_eig, states[i].parity_eig,
                    sd.entropy, sd.entropy - s_ground});
  }
  return rows;
}

}  // namespace quasient::ed
