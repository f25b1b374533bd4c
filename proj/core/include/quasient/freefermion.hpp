#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "quasient/errors.hpp"
#include "quasient/model.hpp"

namespace quasient::freefermion {

/// Quasiparticle modes of a quadratic Majorana form, obtained from the
/// eigendecomposition iA = (1/4)(V diag(eps) V^H - conj(V) diag(eps) V^T).
/// The stored energies are the physical single-particle gaps, i.e. four
/// times the eigenvalues of iA with the model-module Majorana convention;
/// the many-body spectrum is E0 + sum_{k in K} eps_k with E0 = -sum eps/2.
struct QuasiparticleBasis {
  Eigen::MatrixXcd V;        // 2n x n isometry, columns sorted by energy
  Eigen::VectorXd epsilon;   // ascending, nonnegative
  std::vector<int> reflection_parity;  // per mode: +1 / -1, 0 when unresolved
  Eigen::VectorXd momentum;  // open-chain labels pi*j/(n+1), metadata only
  int n = 0;
  int ground_parity = 0;     // many-body parity of the quasiparticle vacuum
  double ground_energy = 0.0;
  std::vector<int> near_zero_modes;  // indices flagged as eps ~ 0

  /// Parity eigenvalue of the state with |K| occupied modes.
  int state_parity(int k_occupied) const {
    return (k_occupied % 2 == 0) ? ground_parity : -ground_parity;
  }
};

/// Restriction of <w_i w_j> = delta_ij + i Gamma_ij to the first L sites.
struct CorrelationMatrix {
  Eigen::MatrixXd Gamma;  // 2L x 2L, exactly antisymmetric
  int L = 0;
  std::string source;
};

/// Pairing spectrum nu_j of i*Gamma (nonnegative half, descending), the
/// entanglement entropy, and optionally the largest Schmidt probabilities
/// prod_j (1 + m_j nu_j)/2 enumerated greedily from the largest down.
struct EntanglementSpectrum {
  Eigen::VectorXd nu;
  double entropy = 0.0;
  std::vector<double> schmidt_probs;
};

/// Occupied-mode set K defining the excitation b+_{k1} ... b+_{kk} |vac>.
struct ExcitationSpec {
  std::vector<int> occupied;

  int quasiparticle_count() const { return static_cast<int>(occupied.size()); }
};

struct SpectrumOptions {
  bool with_schmidt_probs = false;
  std::size_t max_probs = std::size_t{1} << 20;
  double prob_cum_target = 1.0 - 1e-12;
};

/// Diagonalizes the quadratic form. Degenerate energy clusters are rotated
/// to definite reflection parity when the form commutes with the site
/// reflection; near-zero modes are flagged, not rejected.
QuasiparticleBasis diagonalize(const model::MajoranaQuadraticForm& form);

/// Ground-state (quasiparticle vacuum) correlation matrix on sites 1..L.
CorrelationMatrix correlation_ground(const QuasiparticleBasis& basis, int L);

/// Rank-2 antisymmetric update chi_k = 2i(conj(u_k) u_k^T - u_k u_k^H)
/// built from mode k restricted to the first 2L Majorana rows.
Eigen::MatrixXd chi(const QuasiparticleBasis& basis, int k, int L);

/// Correlation matrix of the excited state: Gamma_ground - sum_{k in K} chi_k.
CorrelationMatrix correlation_excited(const QuasiparticleBasis& basis,
                                      const ExcitationSpec& spec, int L);

/// Pairing spectrum and entropy (natural log) from a correlation matrix.
EntanglementSpectrum spectrum_from_gamma(const CorrelationMatrix& corr,
                                         const SpectrumOptions& opt = {});

/// Excess of entanglement dS = S(excited) - S(ground) at cut L (default n/2).
double excess_entropy(const QuasiparticleBasis& basis, const ExcitationSpec& spec,
                      int L = -1);
double excess_entropy(const model::MajoranaQuadraticForm& form,
                      const ExcitationSpec& spec, int L = -1);

/// <vac| b+_{k;L} b_{k;L} |vac> = sum_l |u_k . u_l|^2, the weight of the
/// half-restricted mode operator on the vacuum; decays as O(1/n) at L = n/2.
double half_chain_mode_weight(const QuasiparticleBasis& basis, int k, int L);

/// Dimension of the kernel of Gamma: number of eigenvalues of i*Gamma with
/// magnitude below tol (always even for antisymmetric Gamma).
int kernel_dimension(const CorrelationMatrix& corr, double tol = 1e-6);

/// Binary entropy of the pair (1+nu)/2, (1-nu)/2 in natural log.
double pair_entropy(double nu);

}  // namespace quasient::freefermion
