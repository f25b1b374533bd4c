#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "quasient/errors.hpp"

namespace quasient::mpsx {

/// Translation-invariant MPS tensor A (d physical matrices, D x D) together
/// with the leading left/right fixed points of its transfer map, normalized
/// so the transfer spectral radius is 1 and tr[l r] = 1.
struct UniformMPS {
  std::vector<Eigen::MatrixXcd> A;
  Eigen::MatrixXcd l, r;  // Hermitian positive definite
  bool normalized = false;

  int d() const { return static_cast<int>(A.size()); }
  int D() const { return A.empty() ? 0 : static_cast<int>(A[0].rows()); }
};

/// Tangent-space excitation tensor in the left gauge
/// (sum_s A^s+ l B^s = 0), unit-normalized under sum_s tr[B^s+ l B^s r].
struct ExcitationTensor {
  std::vector<Eigen::MatrixXcd> B;
  double momentum = 0.0;  // kappa in [0, 2pi)
};

/// Half-infinite entanglement data of the ground state: Xi = L^H r L with
/// l = L L^H (Cholesky), its eigenvalues, and the entropy S = -sum li log li.
struct GroundSpectrum {
  Eigen::MatrixXcd Xi;
  Eigen::VectorXd eigenvalues;  // descending, sum = 1
  double entropy = 0.0;
};

inline constexpr int kBondCap = 16;

/// Normalizes A and computes the fixed points by power iteration (residual
/// 1e-12, cap 1e4) with a dense D^2 x D^2 fallback. Throws
/// DegenerateInputError when the leading transfer eigenvalue is degenerate
/// (transfer gap <= 1e-6, non-injective tensor).
UniformMPS fixed_points(std::vector<Eigen::MatrixXcd> A);

GroundSpectrum ground_spectrum(const UniformMPS& ump);

/// Projects B_raw onto the left-gauge-fixed tangent space (orthogonally in
/// the l,r-weighted inner product) and normalizes. Throws
/// DegenerateInputError when the projection vanishes (e.g. B_raw = A).
ExcitationTensor gauge_fix(const UniformMPS& ump,
                           const std::vector<Eigen::MatrixXcd>& B_raw, double kappa);

/// Half-chain reduced-density eigenvalues and entropy of the momentum
/// excitation ansatz: each eigenvalue of Xi appears twice with weight 1/2,
/// so the entropy is S[ground] + log 2 for every gauge-fixed B and kappa.
std::pair<Eigen::VectorXd, double> excitation_spectrum(const UniformMPS& ump,
                                                       const ExcitationTensor& exc);

/// Explicit amplitudes of the W-site window restriction
///   sum_{m=1..W} e^{i kappa m} L^H A^{s_1} ... B^{s_m} ... A^{s_W} R,
/// with Cholesky closures l = L L^H, r = R R^H kept as open boundary legs of
/// dimension D each. Index layout: ((a * d^W + s) * D + b) with s_1 the most
/// significant physical digit. Unit-normalized. Oracle-sized only:
/// d^W <= 2^20 and D^2 d^W <= 2^22.
Eigen::VectorXcd finite_window_state(const UniformMPS& ump,
                                     const ExcitationTensor& exc, int W);

/// Random tensor draws (deterministic in the seed): i.i.d. standard complex
/// Gaussian entries, transfer-normalized, resampled until injective.
UniformMPS random_uniform_mps(int d, int D, std::uint64_t seed);
std::vector<Eigen::MatrixXcd> random_tensor(int d, int D, std::uint64_t seed);

}  // namespace quasient::mpsx
