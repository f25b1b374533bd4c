// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Heavy chain sizes are cached and scans run across the
// available cores; every tolerance is pinned in code.

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "quasient/analysis.hpp"
#include "quasient/ed.hpp"
#include "quasient/freefermion.hpp"
#include "quasient/model.hpp"
#include "quasient/mpsx.hpp"
#include "quasient/parallel.hpp"

using namespace quasient;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

constexpr double kLog2 = std::numbers::ln2;

int worker_threads() {
  if (const char* env = std::getenv("QUASIENT_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct BasisCache {
  std::map<std::tuple<double, double, int>, freefermion::QuasiparticleBasis> cache;

  const freefermion::QuasiparticleBasis& get(double gamma, double h, int n) {
    const auto key = std::make_tuple(gamma, h, n);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache
               .emplace(key, freefermion::diagonalize(
                                 model::build_xy_majorana(model::make_xy(gamma, h, n))))
               .first;
    }
    return it->second;
  }
};

BasisCache g_bases;
std::vector<double> g_single_dS;  // every single-excitation dS from criteria 1-3

struct Result {
  bool pass = true;
  std::string detail;
};

int nearest_in_class(const freefermion::QuasiparticleBasis& b, int cls, double k0) {
  int best = -1;
  double dist = 1e300;
  for (int k = 0; k < b.n; ++k) {
    if (b.reflection_parity[k] != cls) continue;
    const double d = std::abs(b.momentum(k) - k0);
    if (d < dist) {
      dist = d;
      best = k;
    }
  }
  return best;
}

std::vector<double> all_single_dS(const freefermion::QuasiparticleBasis& b, int threads) {
  const int n = b.n;
  const auto ground = freefermion::correlation_ground(b, n / 2);
  const double s0 = freefermion::spectrum_from_gamma(ground).entropy;
  std::vector<double> dS(n);
  parallel_for(n, threads, [&](int k) {
    auto corr = ground;
    corr.Gamma -= freefermion::chi(b, k, n / 2);
    dS[k] = freefermion::spectrum_from_gamma(corr).entropy - s0;
  });
  return dS;
}

char buf[512];

// ---------------------------------------------------------------------------

Result criterion1_oracle_equivalence() {
  Result r;
  double worst = 0.0;
  int states = 0;
  for (double gamma : {0.25, 0.5, 1.0}) {
    for (double h : {0.5, 0.9, 2.0}) {
      for (int n : {6, 8, 10, 12}) {
        const auto m = model::make_xy(gamma, h, n);
        const auto& basis = g_bases.get(gamma, h, n);
        const auto H = model::build_spin_matrix(m);
        const VectorXcd omega = ed::lowest_eigenstates(H, 1).front().vector;
        const int L = n / 2;

        const double sg_ff =
            freefermion::spectrum_from_gamma(freefermion::correlation_ground(basis, L))
                .entropy;
        const double sg_ed = ed::schmidt_spectrum({omega, 0.0, {}, {}}, L).entropy;
        worst = std::max(worst, std::abs(sg_ff - sg_ed));
        ++states;

        for (int k = 0; k < n; ++k) {
          VectorXcd phi = VectorXcd::Zero(omega.size());
          for (int i = 0; i < 2 * n; ++i)
            phi += basis.V(i, k) / std::numbers::sqrt2 * model::apply_majorana(i, omega, n);
          const double se_ed = ed::schmidt_spectrum({phi, 0.0, {}, {}}, L).entropy;
          const double se_ff =
              freefermion::spectrum_from_gamma(
                  freefermion::correlation_excited(basis, {{k}}, L))
                  .entropy;
          worst = std::max(worst, std::abs(se_ff - se_ed));
          g_single_dS.push_back(se_ff - sg_ff);
          ++states;
        }
      }
    }
  }
  r.pass = worst <= 1e-9;
  std::snprintf(buf, sizeof buf, "worst |S_fermion - S_ED| = %.2e over %d states (tol 1e-9)",
                worst, states);
  r.detail = buf;
  return r;
}

Result criterion2_single_particle_plateau() {
  Result r;
  const int n = 512;
  const auto& basis = g_bases.get(0.5, 0.9, n);
  const auto dS = all_single_dS(basis, worker_threads());
  for (double v : dS) g_single_dS.push_back(v);

  double worst_dev = 0.0;
  bool below_log2 = true;
  int mid_band = 0;
  for (int k = 0; k < n; ++k) {
    const bool mid = basis.momentum(k) >= 0.1 * std::numbers::pi &&
                     basis.momentum(k) <= 0.9 * std::numbers::pi;
    if (!mid) continue;
    ++mid_band;
    if (!(dS[k] < kLog2)) below_log2 = false;
    worst_dev = std::max(worst_dev, kLog2 - dS[k]);
  }

  int alternation_violations = 0;
  for (int k = 1; k < n; ++k) {
    const bool mid = basis.momentum(k) >= 0.1 * std::numbers::pi &&
                     basis.momentum(k) <= 0.9 * std::numbers::pi;
    if (!mid) continue;
    if (basis.reflection_parity[k] == 0 || basis.reflection_parity[k - 1] == 0) continue;
    if (basis.reflection_parity[k] == basis.reflection_parity[k - 1])
      ++alternation_violations;
  }

  r.pass = below_log2 && worst_dev <= 0.02 && alternation_violations == 0;
  std::snprintf(buf, sizeof buf,
                "n=512 mid-band modes: %d, worst log2-dS = %.2e (tol 0.02), dS<log2 %s, "
                "band interleaving violations = %d",
                mid_band, worst_dev, below_log2 ? "yes" : "NO", alternation_violations);
  r.detail = buf;
  return r;
}

Result criterion3_correction_scaling() {
  Result r;
  std::string parts;
  for (int cls : {+1, -1}) {
    std::vector<std::pair<double, double>> pts;
    for (int n : {128, 256, 512, 1024}) {
      const auto& basis = g_bases.get(0.5, 0.9, n);
      const int k = nearest_in_class(basis, cls, std::numbers::pi / 2);
      const double dS = freefermion::excess_entropy(basis, {{k}}, n / 2);
      g_single_dS.push_back(dS);
      pts.emplace_back(n, kLog2 - dS);
    }
    const auto fit = analysis::fit_correction(pts);
    if (!(fit.exponent >= -1.15 && fit.exponent <= -0.85)) r.pass = false;
    std::snprintf(buf, sizeof buf, "R%+d exponent = %.3f  ", cls, fit.exponent);
    parts += buf;
  }
  r.detail = parts + "(target -1 +- 0.15, n in {128..1024})";
  return r;
}

Result criterion4_three_particle_plateau() {
  Result r;
  const int n = 512;
  analysis::ScanOptions opt;
  opt.threads = worker_threads();
  const auto res =
      analysis::scan_three_particle(model::make_xy(1.0, 2.0, n), {n}, std::nullopt, opt);
  const int lo = res.fixed[0][1];
  const int hi = res.fixed[0][2];

  double worst_plateau = 0.0;
  double min_peak = 1e300;
  for (const auto& row : res.rows) {
    int i = -1;
    for (int m : row.modes)
      if (m != lo && m != hi) i = m;
    const bool in_peak = std::abs(i - lo) <= n / 16 || std::abs(i - hi) <= n / 16;
    if (in_peak)
      min_peak = std::min(min_peak, row.dS);
    else
      worst_plateau = std::max(worst_plateau, std::abs(row.dS - 3 * kLog2));
  }
  r.pass = worst_plateau <= 0.05 && min_peak > 2 * kLog2;
  std::snprintf(buf, sizeof buf,
                "n=512 fixed modes (%d,%d): plateau worst |dS-3log2| = %.3f (tol 0.05), "
                "min peak dS = %.3f > 2 log2 = %.3f: %s",
                lo, hi, worst_plateau, min_peak, 2 * kLog2,
                min_peak > 2 * kLog2 ? "yes" : "NO");
  r.detail = buf;
  return r;
}

Result criterion5_subadditivity_bound() {
  Result r;
  double worst = -1e300;
  for (double dS : g_single_dS) worst = std::max(worst, dS - kLog2);
  r.pass = worst <= 1e-9;
  std::snprintf(buf, sizeof buf,
                "max(dS - log2) = %.2e over %zu single-excitation states (tol 1e-9)", worst,
                g_single_dS.size());
  r.detail = buf;
  return r;
}

Result criterion6_degeneracy_structure() {
  Result r;
  const int n = 512;
  const auto& basis = g_bases.get(0.5, 0.9, n);
  freefermion::SpectrumOptions opt;
  opt.with_schmidt_probs = true;
  opt.max_probs = 64;
  opt.prob_cum_target = 2.0;  // disabled: always enumerate 64 values

  const int k0 = static_cast<int>(basis.near_zero_modes.size());  // lowest bulk mode
  const auto single = freefermion::spectrum_from_gamma(
      freefermion::correlation_excited(basis, {{k0}}, n / 2), opt);
  double worst_pair = 0.0;
  for (std::size_t i = 0; i + 1 < 64; i += 2)
    worst_pair = std::max(worst_pair,
                          std::abs(single.schmidt_probs[i] / single.schmidt_probs[i + 1] - 1.0));

  const int ka = nearest_in_class(basis, +1, std::numbers::pi / 3);
  const int kb = nearest_in_class(basis, +1, 2 * std::numbers::pi / 3);
  const auto twin = freefermion::spectrum_from_gamma(
      freefermion::correlation_excited(basis, {{ka, kb}}, n / 2), opt);
  double worst_quad = 0.0;
  for (std::size_t i = 0; i + 3 < 64; i += 4)
    worst_quad = std::max(worst_quad,
                          std::abs(twin.schmidt_probs[i] / twin.schmidt_probs[i + 3] - 1.0));

  r.pass = worst_pair <= 1e-3 && worst_quad <= 1e-2;
  std::snprintf(buf, sizeof buf,
                "top-64 pairing dev = %.2e (tol 1e-3); two same-class modes (%d,%d) "
                "quadruple dev = %.2e (tol 1e-2)",
                worst_pair, ka, kb, worst_quad);
  r.detail = buf;
  return r;
}

Result criterion7_mode_weight_decay() {
  Result r;
  std::vector<double> w;
  for (int n : {128, 256, 512}) {
    const auto& basis = g_bases.get(0.5, 0.9, n);
    const int k0 = static_cast<int>(basis.near_zero_modes.size());
    w.push_back(freefermion::half_chain_mode_weight(basis, k0, n / 2));
  }
  bool ok = true;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const double ratio = w[i] / w[i + 1];
    if (!(ratio >= 1.5 && ratio <= 2.5)) ok = false;  // 2x +- 25% per doubling
  }
  r.pass = ok;
  std::snprintf(buf, sizeof buf,
                "lowest-bulk-mode weight * n = {%.3f, %.3f, %.3f} for n = {128,256,512} "
                "(1/n within 25%%: %s)",
                128 * w[0], 256 * w[1], 512 * w[2], ok ? "yes" : "NO");
  r.detail = buf;
  return r;
}

Result criterion8_tilted_ising_trend() {
  Result r;
  std::vector<std::vector<double>> dS;  // per n: the two lowest excitations
  for (int n : {10, 12, 14}) {
    const auto rows = ed::excess_table(model::make_tilted_ising(1, 1, 1, n), 8);
    dS.push_back({rows[1].dS, rows[2].dS});
  }
  bool in_band = true;
  for (const auto& v : dS)
    for (double x : v)
      if (!(x > 0.0 && x <= kLog2 + 0.02)) in_band = false;

  // The per-state values oscillate at desk scale; the trend is asserted on
  // the mean of the two lowest excitations.
  const auto mean = [](const std::vector<double>& v) { return 0.5 * (v[0] + v[1]); };
  const bool monotone = mean(dS[0]) < mean(dS[1]) && mean(dS[1]) < mean(dS[2]);

  const bool classify = std::abs(dS[2][0] / kLog2 - 1.0) < 0.35 &&
                        std::abs(dS[2][1] / kLog2 - 1.0) < 0.35;

  r.pass = in_band && monotone && classify;
  std::snprintf(buf, sizeof buf,
                "mean dS of two lowest excitations = {%.4f, %.4f, %.4f} rising: %s; "
                "all in (0, log2+0.02]: %s; n=14 classify k=1 at 0.35: %s",
                mean(dS[0]), mean(dS[1]), mean(dS[2]), monotone ? "yes" : "NO",
                in_band ? "yes" : "NO", classify ? "yes" : "NO");
  r.detail = buf;
  return r;
}

Result criterion9_mps_identity() {
  Result r;
  double worst_identity = 0.0, worst_spectrum = 0.0;
  int checks = 0;
  for (int D : {2, 4, 8}) {
    for (int draw = 0; draw < 20; ++draw) {
      const auto ump = mpsx::random_uniform_mps(2, D, 1000 * D + draw);
      const auto gs = mpsx::ground_spectrum(ump);
      for (double kappa : {0.0, std::numbers::pi / 2, std::numbers::pi}) {
        const auto exc =
            mpsx::gauge_fix(ump, mpsx::random_tensor(2, D, 5000 * D + draw), kappa);
        const auto [spec, S] = mpsx::excitation_spectrum(ump, exc);
        worst_identity = std::max(worst_identity, std::abs(S - gs.entropy - kLog2));
        for (int i = 0; i < D; ++i) {
          worst_spectrum = std::max(
              worst_spectrum, std::abs(spec(2 * i) - 0.5 * gs.eigenvalues(i)));
          worst_spectrum = std::max(
              worst_spectrum, std::abs(spec(2 * i + 1) - 0.5 * gs.eigenvalues(i)));
        }
        ++checks;
      }
    }
  }
  r.pass = worst_identity <= 1e-8 && worst_spectrum <= 1e-8;
  std::snprintf(buf, sizeof buf,
                "%d draws: worst |S - S0 - log2| = %.2e, worst spectrum-doubling "
                "mismatch = %.2e (tol 1e-8)",
                checks, worst_identity, worst_spectrum);
  r.detail = buf;
  return r;
}

Result criterion10_klog2_additivity() {
  Result r;
  const int n = 1024;
  const auto& basis = g_bases.get(1.0, 2.0, n);
  const int k1 = nearest_in_class(basis, +1, std::numbers::pi / 4);
  const int k2 = nearest_in_class(basis, +1, std::numbers::pi / 2);
  const int k3 = nearest_in_class(basis, +1, 3 * std::numbers::pi / 4);

  const double s0 =
      freefermion::spectrum_from_gamma(freefermion::correlation_ground(basis, n / 2)).entropy;
  const std::vector<std::vector<int>> sets = {{k1}, {k1, k2}, {k1, k2, k3}};
  std::string parts;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const double s = freefermion::spectrum_from_gamma(
                         freefermion::correlation_excited(basis, {sets[k]}, n / 2))
                         .entropy;
    const double dev = std::abs((s - s0) - double(k + 1) * kLog2);
    if (dev > 0.05) r.pass = false;
    std::snprintf(buf, sizeof buf, "k=%zu: |dS - k log2| = %.2e  ", k + 1, dev);
    parts += buf;
  }
  r.detail = parts + "(n=1024, same-class modes, tol 0.05)";
  return r;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Result (*fn)();
  };
  const Criterion criteria[] = {
      {1, "oracle equivalence (free fermion vs ED)", criterion1_oracle_equivalence},
      {2, "single-particle plateau at n = 512", criterion2_single_particle_plateau},
      {3, "O(1/n) correction scaling", criterion3_correction_scaling},
      {4, "three-particle plateau and bound-state peaks", criterion4_three_particle_plateau},
      {5, "subadditivity bound dS <= log 2", criterion5_subadditivity_bound},
      {6, "Schmidt degeneracy structure", criterion6_degeneracy_structure},
      {7, "half-chain mode weight 1/n decay", criterion7_mode_weight_decay},
      {8, "tilted Ising excess trend (desk-scale ED)", criterion8_tilted_ising_trend},
      {9, "MPS excitation ansatz identity", criterion9_mps_identity},
      {10, "k log 2 additivity at n = 1024", criterion10_klog2_additivity},
  };

  std::printf("quasient acceptance suite (%d worker threads)\n", worker_threads());
  int passed = 0;
  for (const auto& c : criteria) {
    Result res;
    try {
      res = c.fn();
    } catch (const std::exception& e) {
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %2d %s  %s\n    %s\n", c.id, res.pass ? "PASS" : "FAIL", c.name,
                res.detail.c_str());
    std::fflush(stdout);
    if (res.pass) ++passed;
  }
  std::printf("acceptance: %d/10 criteria passed\n", passed);
  return passed == 10 ? 0 : 1;
}
