#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <optional>
#include <vector>

#include "quasient/errors.hpp"
#include "quasient/model.hpp"

namespace quasient::ed {

/// Eigenstate of a spin Hamiltonian with optional resolved symmetry labels.
struct EigenState {
  Eigen::VectorXcd vector;  // unit norm, length 2^n
  double energy = 0.0;
  std::optional<int> reflection_eig;  // +1 / -1 when resolved
  std::optional<int> parity_eig;
};

/// Half-cut Schmidt data of a pure state.
struct SchmidtData {
  Eigen::VectorXd singular_values;  // descending
  double entropy = 0.0;
  int cut = 0;
};

struct ExcessRow {
  double energy = 0.0;
  std::optional<int> reflection;
  std::optional<int> parity;
  double S = 0.0;
  double dS = 0.0;
};

struct SolveOptions {
  double residual_tol = 1e-8;     // relative to the spectral scale
  int max_basis = 0;              // 0 = automatic
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

/// The M lowest eigenpairs, sorted by energy. Degenerate clusters at the M
/// boundary are returned complete. Dense solver below n = 12, Lanczos with
/// full reorthogonalization (split into reflection/parity sectors when the
/// Hamiltonian commutes with them) from n = 12 up.
std::vector<EigenState> lowest_eigenstates(const model::SpinHamiltonianMatrix& H,
                                           int M, const SolveOptions& opt = {});

/// Rotates degenerate clusters (relative energy tolerance 1e-9) so every
/// state diagonalizes R, and P where it commutes; fills in the labels.
/// States whose cluster fails the symmetry residual stay unresolved.
std::vector<EigenState> symmetry_rotate(std::vector<EigenState> states,
                                        const Eigen::SparseMatrix<double>& R,
                                        const Eigen::SparseMatrix<double>* P = nullptr);

/// Schmidt spectrum of the bipartition after site `cut` (default n/2).
SchmidtData schmidt_spectrum(const EigenState& state, int cut = -1);

/// One row per eigenstate of the model: energy, labels, half-cut entropy and
/// its excess over the ground state of the same chain.
std::vector<ExcessRow> excess_table(const model::SpinChainModel& m, int M,
                                    const SolveOptions& opt = {});

}  // namespace quasient::ed
