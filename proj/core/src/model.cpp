#include "quasient/model.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <vector>

namespace quasient::model {

namespace {

bool finite(double x) { return std::isfinite(x); }

// sz eigenvalue of site j (1-based) in basis state m; bit 0 means sz = +1.
inline int sz_sign(int m, int j, int n) { return ((m >> (n - j)) & 1) ? -1 : +1; }

inline int flip_site(int m, int j, int n) { return m ^ (1 << (n - j)); }

}  // namespace

std::string to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

std::string SpinChainModel::name() const {
  std::ostringstream os;
  if (is_xy()) {
    const auto& p = xy();
    os << "xy(gamma=" << p.gamma << ",h=" << p.h << ")";
  } else {
    const auto& p = tilted();
    os << "tilted_ising(J=" << p.J << ",hz=" << p.hz << ",hx=" << p.hx << ")";
  }
  return os.str();
}

void SpinChainModel::validate() const {
  if (n < 2) throw ConfigError("SpinChainModel: n must be >= 2, got " + std::to_string(n));
  if (is_xy()) {
    if (!finite(xy().gamma) || !finite(xy().h))
      throw ConfigError("SpinChainModel: XY parameters must be finite");
  } else {
    const auto& p = tilted();
    if (!finite(p.J) || !finite(p.hz) || !finite(p.hx))
      throw ConfigError("SpinChainModel: tilted Ising parameters must be finite");
  }
}

void MajoranaQuadraticForm::validate() const {
  if (n < 1 || A.rows() != 2 * n || A.cols() != 2 * n)
    throw ConfigError("MajoranaQuadraticForm: A must be 2n x 2n");
  const double asym = (A + A.transpose()).cwiseAbs().maxCoeff();
  if (asym != 0.0)
    throw PhysicalityError("MajoranaQuadraticForm: A is not exactly antisymmetric, max|A+A^T| = " +
                           std::to_string(asym));
}

MajoranaQuadraticForm build_xy_majorana(const SpinChainModel& m) {
  m.validate();
  if (!m.is_xy())
    throw ConfigError("build_xy_majorana: model is not quadratic (expected XY)");
  if (m.boundary != Boundary::open)
    throw ConfigError("build_xy_majorana: only open boundaries are supported; "
                      "periodic chains are handled by the ED oracle");

  const int n = m.n;
  const double jx = (1.0 + m.xy().gamma) / 2.0;
  const double jy = (1.0 - m.xy().gamma) / 2.0;
  const double h = m.xy().h;

  // H = sum_{a<b} c_ab (-i) w_a w_b maps to A_ab = -c_ab / 2:
  //   h sz_j          -> c(2j-1, 2j)   = h
  //   jx sx_j sx_{j+1} -> c(2j, 2j+1)   = jx
  //   jy sy_j sy_{j+1} -> c(2j-1, 2j+2) = -jy
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    A(2 * j, 2 * j + 1) = -h / 2.0;
  }
  for (int j = 0; j + 1 < n; ++j) {
    A(2 * j + 1, 2 * j + 2) = -jx / 2.0;
    A(2 * j, 2 * j + 3) = jy / 2.0;
  }
  A -= Eigen::MatrixXd(A.transpose()).eval();
  MajoranaQuadraticForm form{std::move(A), n};
  form.validate();
  return form;
}

SpinHamiltonianMatrix build_spin_matrix(const SpinChainModel& m, int site_cap) {
  m.validate();
  if (m.n > site_cap)
    throw SizeCapError("build_spin_matrix: n = " + std::to_string(m.n) +
                       " exceeds the site cap " + std::to_string(site_cap));

  const int n = m.n;
  const int dim = 1 << n;
  const int nbonds = (m.boundary == Boundary::periodic && n > 2) ? n : n - 1;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(dim) * (n + nbonds));

  const bool xy = m.is_xy();
  const double jx = xy ? (1.0 + m.xy().gamma) / 2.0 : m.tilted().J;
  const double jy = xy ? (1.0 - m.xy().gamma) / 2.0 : 0.0;
  const double hz = xy ? m.xy().h : m.tilted().hz;
  const double hx = xy ? 0.0 : m.tilted().hx;

  for (int s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int j = 1; j <= n; ++j) diag += hz * sz_sign(s, j, n);
    if (diag != 0.0) trip.emplace_back(s, s, diag);

    if (hx != 0.0) {
      for (int j = 1; j <= n; ++j) trip.emplace_back(flip_site(s, j, n), s, hx);
    }

    for (int b = 0; b < nbonds; ++b) {
      const int j = b + 1;
      const int jnext = (j % n) + 1;
      // sx sx flips both spins with weight 1; sy sy flips both with
      // weight -sz_j sz_{j+1} evaluated before the flip.
      const double w = jx - jy * sz_sign(s, j, n) * sz_sign(s, jnext, n);
      if (w != 0.0) {
        const int t = flip_site(flip_site(s, j, n), jnext, n);
        trip.emplace_back(t, s, w);
      }
    }
  }

  Eigen::SparseMatrix<double> H(dim, dim);
  H.setFromTriplets(trip.begin(), trip.end());
  return SpinHamiltonianMatrix{std::move(H), n, m};
}

int reflect_basis_index(int m, int n) {
  int r = 0;
  for (int b = 0; b < n; ++b) {
    r = (r << 1) | (m & 1);
    m >>= 1;
  }
  return r;
}

Eigen::SparseMatrix<double> reflection_matrix(int n) {
  if (n < 1) throw ConfigError("reflection_matrix: n must be >= 1");
  const int dim = 1 << n;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(dim);
  for (int s = 0; s < dim; ++s) trip.emplace_back(reflect_basis_index(s, n), s, 1.0);
  Eigen::SparseMatrix<double> R(dim, dim);
  R.setFromTriplets(trip.begin(), trip.end());
  return R;
}

Eigen::SparseMatrix<double> parity_matrix(int n) {
  if (n < 1) throw ConfigError("parity_matrix: n must be >= 1");
  const int dim = 1 << n;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(dim);
  for (int s = 0; s < dim; ++s)
    trip.emplace_back(s, s, (std::popcount(static_cast<unsigned>(s)) & 1) ? -1.0 : 1.0);
  Eigen::SparseMatrix<double> P(dim, dim);
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

Eigen::VectorXcd apply_majorana(int a, const Eigen::VectorXcd& v, int n) {
  if (a < 0 || a >= 2 * n) throw ConfigError("apply_majorana: index out of range");
  const int dim = 1 << n;
  if (v.size() != dim) throw ConfigError("apply_majorana: vector size mismatch");

  const int j = a / 2 + 1;          // 1-based site
  const bool ytype = (a % 2) == 1;  // even index -> x-type, odd -> y-type
  const int site_bit = 1 << (n - j);
  const unsigned string_mask = (j > 1) ? ~((1u << (n - j + 1)) - 1u) & ((1u << n) - 1u) : 0u;

  Eigen::VectorXcd out(dim);
  for (int s = 0; s < dim; ++s) {
    // Jordan-Wigner string over sites l < j.
    double phase = (std::popcount(static_cast<unsigned>(s) & string_mask) & 1) ? -1.0 : 1.0;
    const int t = s ^ site_bit;
    if (ytype) {
      // sy|0> = i|1>, sy|1> = -i|0>
      const double ysign = (s & site_bit) ? -1.0 : 1.0;
      out(t) = std::complex<double>(0.0, phase * ysign) * v(s);
    } else {
      out(t) = phase * v(s);
    }
  }
  return out;
}

}  // namespace quasient::model
