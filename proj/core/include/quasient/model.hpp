#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <string>
#include <variant>

#include "quasient/errors.hpp"

namespace quasient::model {

enum class Boundary { open, periodic };

std::string to_string(Boundary b);

/// Heisenberg XY chain,
///   H = sum_j (1+gamma)/2 sx_j sx_{j+1} + (1-gamma)/2 sy_j sy_{j+1} + h sum_j sz_j.
/// gamma = 1 is the transverse-field Ising chain.
struct XYParams {
  double gamma;
  double h;
};

/// Ising chain in a mixed (transverse + longitudinal) field,
///   H = sum_j J sx_j sx_{j+1} + hz sz_j + hx sx_j,
/// with the antiferromagnetic sign (+) on all three terms. Nonintegrable.
struct TiltedIsingParams {
  double J = 1.0;
  double hz = 1.0;
  double hx = 1.0;
};

struct SpinChainModel {
  std::variant<XYParams, TiltedIsingParams> kind;
  int n = 0;
  Boundary boundary = Boundary::open;

  bool is_xy() const { return std::holds_alternative<XYParams>(kind); }
  const XYParams& xy() const { return std::get<XYParams>(kind); }
  const TiltedIsingParams& tilted() const { return std::get<TiltedIsingParams>(kind); }

  /// Quadratic in fermions, i.e. mappable to a Majorana form.
  bool is_quadratic() const { return is_xy(); }

  /// Short descriptor used in output files, e.g. "xy(gamma=0.5,h=0.9)".
  std::string name() const;

  /// Throws ConfigError if n < 2 or parameters are not finite.
  void validate() const;
};

inline SpinChainModel make_xy(double gamma, double h, int n,
                              Boundary boundary = Boundary::open) {
  return SpinChainModel{XYParams{gamma, h}, n, boundary};
}

inline SpinChainModel make_tilted_ising(double J, double hz, double hx, int n,
                                        Boundary boundary = Boundary::open) {
  return SpinChainModel{TiltedIsingParams{J, hz, hx}, n, boundary};
}

/// Quadratic Majorana form H = sum_{ij} w_i (iA)_{ij} w_j with A real and
/// exactly antisymmetric. Majorana ordering: w_{2j-1}, w_{2j} belong to
/// site j, with the Jordan-Wigner convention
///   w_{2j-1} = (prod_{l<j} sz_l) sx_j,   w_{2j} = (prod_{l<j} sz_l) sy_j.
struct MajoranaQuadraticForm {
  Eigen::MatrixXd A;  // 2n x 2n
  int n = 0;

  void validate() const;  // antisymmetry and size checks
};

/// Dense-basis spin Hamiltonian for the ED oracle. Product sz basis with
/// site 1 at the most significant bit position; bit 0 means sz = +1.
struct SpinHamiltonianMatrix {
  Eigen::SparseMatrix<double> H;  // 2^n x 2^n, real symmetric
  int n = 0;
  SpinChainModel source;
};

/// Maps an open-boundary XY chain to its Majorana quadratic form.
/// Rejects tilted Ising (not quadratic) and periodic boundaries.
MajoranaQuadraticForm build_xy_majorana(const SpinChainModel& m);

/// Explicit 2^n spin matrix for any supported model. Throws SizeCapError
/// when n exceeds site_cap (default 16).
SpinHamiltonianMatrix build_spin_matrix(const SpinChainModel& m, int site_cap = 16);

/// Spatial reflection j -> n+1-j as a permutation matrix on the product basis.
Eigen::SparseMatrix<double> reflection_matrix(int n);

/// Parity P = prod_j sz_j as a diagonal matrix on the product basis.
Eigen::SparseMatrix<double> parity_matrix(int n);

/// Basis index of the reflected configuration (bit-reversal of the n bits).
int reflect_basis_index(int m, int n);

/// Applies the Jordan-Wigner Majorana operator w_a (a in [0, 2n), even a
/// is the x-type operator of site a/2, odd a the y-type) to a 2^n vector.
Eigen::VectorXcd apply_majorana(int a, const Eigen::VectorXcd& v, int n);

}  // namespace quasient::model
