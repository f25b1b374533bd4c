#include "quasient/mpsx.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "quasient/detail/random.hpp"

namespace quasient::mpsx {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

MatrixXcd transfer_right(const std::vector<MatrixXcd>& A, const MatrixXcd& X) {
  MatrixXcd out = MatrixXcd::Zero(X.rows(), X.cols());
  for (const auto& As : A) out.noalias() += As * X * As.adjoint();
  return out;
}

MatrixXcd transfer_left(const std::vector<MatrixXcd>& A, const MatrixXcd& X) {
  MatrixXcd out = MatrixXcd::Zero(X.rows(), X.cols());
  for (const auto& As : A) out.noalias() += As.adjoint() * X * As;
  return out;
}

// vec(A X A^H) = (conj(A) (x) A) vec(X), column-major.
MatrixXcd dense_transfer(const std::vector<MatrixXcd>& A) {
  const int D = static_cast<int>(A[0].rows());
  MatrixXcd T = MatrixXcd::Zero(D * D, D * D);
  for (const auto& As : A) {
    for (int j2 = 0; j2 < D; ++j2)
      for (int i2 = 0; i2 < D; ++i2)
        for (int j1 = 0; j1 < D; ++j1)
          for (int i1 = 0; i1 < D; ++i1)
            T(i1 + D * i2, j1 + D * j2) += std::conj(As(i2, j2)) * As(i1, j1);
  }
  return T;
}

void hermitize(MatrixXcd& X) { X = 0.5 * (X + X.adjoint()).eval(); }

// Leading fixed point of the given transfer action by power iteration,
// falling back to the dense transfer eigenvector.
MatrixXcd fixed_point_of(const std::vector<MatrixXcd>& A, bool left,
                         const MatrixXcd& Tdense) {
  const int D = static_cast<int>(A[0].rows());
  MatrixXcd X = MatrixXcd::Identity(D, D);
  X /= X.norm();
  bool converged = false;
  double best = 1e300;
  int stalled = 0;
  for (int it = 0; it < 10000; ++it) {
    MatrixXcd Y = left ? transfer_left(A, X) : transfer_right(A, X);
    Y /= Y.norm();
    hermitize(Y);
    const double delta = (Y - X).norm();
    X = Y;
    if (delta <= 1e-15) {
      converged = true;
      break;
    }
    // roundoff floor: accept once progress stalls below the 1e-12 target
    if (delta < best) {
      best = delta;
      stalled = 0;
    } else if (++stalled > 20 && best <= 1e-12) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    // dense fallback: leading eigenvector of T (right) or T^H (left)
    Eigen::ComplexEigenSolver<MatrixXcd> es(left ? MatrixXcd(Tdense.adjoint()) : Tdense);
    int imax = 0;
    for (int i = 1; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(imax))) imax = i;
    VectorXcd v = es.eigenvectors().col(imax);
    X = Eigen::Map<const MatrixXcd>(v.data(), D, D);
    hermitize(X);
    X /= X.norm();
  }
  // fix the sign so the matrix is positive (trace of a PD matrix is > 0)
  if (X.trace().real() < 0.0) X = -X;
  return X;
}

void require_positive_definite(const MatrixXcd& X, const char* who) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(X, Eigen::EigenvaluesOnly);
  const double mn = es.eigenvalues().minCoeff();
  const double mx = es.eigenvalues().maxCoeff();
  if (mn <= 1e-12 * std::max(mx, 1e-300))
    throw DegenerateInputError(std::string(who) +
                               ": fixed point is not positive definite (min eig " +
                               std::to_string(mn) + ")");
}

double gauge_residual(const UniformMPS& ump, const std::vector<MatrixXcd>& B) {
  MatrixXcd C = MatrixXcd::Zero(ump.D(), ump.D());
  for (int s = 0; s < ump.d(); ++s) C.noalias() += ump.A[s].adjoint() * ump.l * B[s];
  return C.norm();
}

double excitation_norm_sq(const UniformMPS& ump, const std::vector<MatrixXcd>& B) {
  std::complex<double> nrm = 0.0;
  for (int s = 0; s < ump.d(); ++s)
    nrm += (B[s].adjoint() * ump.l * B[s] * ump.r).trace();
  return nrm.real();
}

}  // namespace

UniformMPS fixed_points(std::vector<MatrixXcd> A) {
  if (A.empty()) throw ConfigError("fixed_points: empty tensor");
  const int D = static_cast<int>(A[0].rows());
  if (D < 1 || D > kBondCap)
    throw SizeCapError("fixed_points: bond dimension must be in [1, " +
                       std::to_string(kBondCap) + "]");
  for (const auto& As : A)
    if (As.rows() != D || As.cols() != D)
      throw ConfigError("fixed_points: inconsistent tensor shapes");

  // Spectral radius and gap from the dense transfer matrix (D <= 16 keeps
  // this cheap); the leading eigenvalue of an injective tensor is real > 0.
  MatrixXcd T = dense_transfer(A);
  Eigen::ComplexEigenSolver<MatrixXcd> es(T);
  if (es.info() != Eigen::Success)
    throw NumericalError("fixed_points: transfer eigensolver failed");
  std::vector<double> mags(es.eigenvalues().size());
  for (int i = 0; i < es.eigenvalues().size(); ++i) mags[i] = std::abs(es.eigenvalues()(i));
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  const double lam = mags[0];
  if (lam <= 0.0) throw DegenerateInputError("fixed_points: zero transfer spectrum");
  if (mags.size() > 1 && (lam - mags[1]) / lam <= 1e-6)
    throw DegenerateInputError(
        "fixed_points: degenerate leading transfer eigenvalue (gap " +
        std::to_string((lam - mags[1]) / lam) + "), tensor is not injective");

  const double root = std::sqrt(lam);
  for (auto& As : A) As /= root;
  T /= lam;

  UniformMPS ump;
  ump.A = std::move(A);
  ump.r = fixed_point_of(ump.A, false, T);
  ump.l = fixed_point_of(ump.A, true, T);
  require_positive_definite(ump.r, "fixed_points(r)");
  require_positive_definite(ump.l, "fixed_points(l)");

  ump.r /= ump.r.trace().real();
  const double lr = (ump.l * ump.r).trace().real();
  if (lr <= 0.0) throw NumericalError("fixed_points: tr[l r] <= 0");
  ump.l /= lr;
  ump.normalized = true;

  const double res_r = (transfer_right(ump.A, ump.r) - ump.r).norm();
  const double res_l = (transfer_left(ump.A, ump.l) - ump.l).norm();
  if (res_r > 1e-10 * ump.r.norm() || res_l > 1e-10 * ump.l.norm())
    throw ConvergenceError("fixed_points: fixed-point residual above 1e-10");
  return ump;
}

GroundSpectrum ground_spectrum(const UniformMPS& ump) {
  if (!ump.normalized) throw ConfigError("ground_spectrum: call fixed_points first");
  Eigen::LLT<MatrixXcd> llt(ump.l);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(ump.l, Eigen::EigenvaluesOnly);
    throw NumericalError("ground_spectrum: Cholesky of l failed, smallest eigenvalue " +
                         std::to_string(es.eigenvalues().minCoeff()));
  }
  const MatrixXcd L = llt.matrixL();
  GroundSpectrum gs;
  gs.Xi = L.adjoint() * ump.r * L;
  hermitize(gs.Xi);
  if (std::abs(gs.Xi.trace().real() - 1.0) > 1e-12)
    throw NumericalError("ground_spectrum: tr Xi deviates from 1");

  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gs.Xi);
  if (es.info() != Eigen::Success)
    throw NumericalError("ground_spectrum: eigensolver failed");
  const int D = ump.D();
  gs.eigenvalues.resize(D);
  gs.entropy = 0.0;
  for (int i = 0; i < D; ++i) {
    double v = es.eigenvalues()(D - 1 - i);
    if (v < -1e-12)
      throw NumericalError("ground_spectrum: negative Xi eigenvalue " + std::to_string(v));
    v = std::max(v, 0.0);
    gs.eigenvalues(i) = v;
    if (v > 0.0) gs.entropy -= v * std::log(v);
  }
  return gs;
}

ExcitationTensor gauge_fix(const UniformMPS& ump,
                           const std::vector<MatrixXcd>& B_raw, double kappa) {
  if (!ump.normalized) throw ConfigError("gauge_fix: call fixed_points first");
  const int d = ump.d();
  const int D = ump.D();
  if (static_cast<int>(B_raw.size()) != d)
    throw ConfigError("gauge_fix: physical dimension mismatch");
  for (const auto& Bs : B_raw)
    if (Bs.rows() != D || Bs.cols() != D) throw ConfigError("gauge_fix: shape mismatch");

  // Orthogonal projection (in the l,r metric) onto sum_s A^s+ l B^s = 0:
  // the complement is spanned by tensors A^s M, and since l is the left
  // fixed point the single correction B -> B - A^s (l^{-1} C) lands exactly
  // on the constraint surface, which also makes the projection idempotent.
  MatrixXcd C = MatrixXcd::Zero(D, D);
  for (int s = 0; s < d; ++s) C.noalias() += ump.A[s].adjoint() * ump.l * B_raw[s];
  Eigen::LLT<MatrixXcd> llt(ump.l);
  if (llt.info() != Eigen::Success)
    throw NumericalError("gauge_fix: Cholesky of l failed");
  const MatrixXcd M = llt.solve(C);

  ExcitationTensor exc;
  exc.momentum = kappa;
  exc.B.resize(d);
  for (int s = 0; s < d; ++s) exc.B[s] = B_raw[s] - ump.A[s] * M;

  const double raw_sq = std::max(excitation_norm_sq(ump, B_raw), 1e-300);
  const double nrm_sq = excitation_norm_sq(ump, exc.B);
  if (nrm_sq <= 1e-20 * raw_sq)
    throw DegenerateInputError("gauge_fix: input projects to zero (pure gauge or "
                               "ground-state direction)");
  const double nrm = std::sqrt(nrm_sq);
  for (auto& Bs : exc.B) Bs /= nrm;

  if (gauge_residual(ump, exc.B) > 1e-10)
    throw NumericalError("gauge_fix: residual above 1e-10 after projection");
  return exc;
}

std::pair<VectorXd, double> excitation_spectrum(const UniformMPS& ump,
                                                const ExcitationTensor& exc) {
  if (static_cast<int>(exc.B.size()) != ump.d())
    throw ConfigError("excitation_spectrum: tensor mismatch");
  if (gauge_residual(ump, exc.B) > 1e-8)
    throw ConfigError("excitation_spectrum: B is not gauge fixed");

  const GroundSpectrum gs = ground_spectrum(ump);
  const int D = ump.D();
  VectorXd spec(2 * D);
  for (int i = 0; i < D; ++i) {
    spec(2 * i) = 0.5 * gs.eigenvalues(i);
    spec(2 * i + 1) = 0.5 * gs.eigenvalues(i);
  }
  double entropy = 0.0;
  for (int i = 0; i < spec.size(); ++i)
    if (spec(i) > 0.0) entropy -= spec(i) * std::log(spec(i));
  return {spec, entropy};
}

Eigen::VectorXcd finite_window_state(const UniformMPS& ump,
                                     const ExcitationTensor& exc, int W) {
  if (!ump.normalized) throw ConfigError("finite_window_state: call fixed_points first");
  const int d = ump.d();
  const int D = ump.D();
  if (W < 1) throw ConfigError("finite_window_state: W must be >= 1");
  double cells = 1.0;
  for (int i = 0; i < W; ++i) {
    cells *= d;
    if (cells > double(1 << 20))
      throw SizeCapError("finite_window_state: d^W exceeds 2^20");
  }
  const std::size_t phys = static_cast<std::size_t>(cells);
  if (phys * D * D > (std::size_t{1} << 22))
    throw SizeCapError("finite_window_state: D^2 d^W exceeds 2^22");

  Eigen::LLT<MatrixXcd> lltl(ump.l), lltr(ump.r);
  if (lltl.info() != Eigen::Success || lltr.info() != Eigen::Success)
    throw NumericalError("finite_window_state: Cholesky of a fixed point failed");
  const MatrixXcd Lh = MatrixXcd(lltl.matrixL()).adjoint();  // L^H, D x D
  const MatrixXcd R = lltr.matrixL();

  // March through the window keeping amplitudes with and without the B
  // insertion; rows are (a, s_1 ... s_m) with s_m fastest.
  MatrixXcd noB = Lh, withB = MatrixXcd::Zero(D, D);
  for (int m = 1; m <= W; ++m) {
    const std::complex<double> phase =
        std::exp(std::complex<double>(0.0, exc.momentum * m));
    const Eigen::Index rows = noB.rows();
    MatrixXcd noB_next(rows * d, D), withB_next(rows * d, D);
    for (Eigen::Index r0 = 0; r0 < rows; ++r0)
      for (int s = 0; s < d; ++s) {
        noB_next.row(r0 * d + s) = noB.row(r0) * ump.A[s];
        withB_next.row(r0 * d + s) =
            withB.row(r0) * ump.A[s] + phase * (noB.row(r0) * exc.B[s]);
      }
    noB = std::move(noB_next);
    withB = std::move(withB_next);
  }

  MatrixXcd psi = withB * R;  // (D * d^W) x D
  VectorXcd out(psi.rows() * psi.cols());
  // row-major flatten: index ((a d^W + s) D + b)
  for (Eigen::Index row = 0; row < psi.rows(); ++row)
    for (int b = 0; b < D; ++b) out(row * D + b) = psi(row, b);
  const double nrm = out.norm();
  if (nrm <= 0.0)
    throw DegenerateInputError("finite_window_state: window state vanishes");
  return out / nrm;
}

std::vector<MatrixXcd> random_tensor(int d, int D, std::uint64_t seed) {
  detail::Gaussian gauss(seed);
  std::vector<MatrixXcd> A(d, MatrixXcd(D, D));
  for (int s = 0; s < d; ++s)
    for (int j = 0; j < D; ++j)
      for (int i = 0; i < D; ++i) A[s](i, j) = gauss.complex_normal();
  return A;
}

UniformMPS random_uniform_mps(int d, int D, std::uint64_t seed) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    try {
      return fixed_points(random_tensor(d, D, seed + 0x9e3779b97f4a7c15ull * attempt));
    } catch (const DegenerateInputError&) {
      // resample until injective
    }
  }
  throw DegenerateInputError("random_uniform_mps: no injective draw in 32 attempts");
}

}  // namespace quasient::mpsx
