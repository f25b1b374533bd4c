#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasient/errors.hpp"
#include "quasient/freefermion.hpp"
#include "quasient/model.hpp"

namespace quasient::analysis {

/// One scan data point: an excitation of one chain instance with its labels
/// and entanglement entropies at the cut L.
struct ScanRow {
  std::string model;
  int n = 0;
  int L = 0;
  model::Boundary boundary = model::Boundary::open;
  std::vector<int> modes;        // occupied mode set (ED rows: state index)
  int reflection = 0;            // +1 / -1, 0 unresolved
  int parity = 0;
  std::vector<double> momentum;  // per-mode labels
  double S_ground = 0.0;
  double S_excited = 0.0;
  double dS = 0.0;
  double dS_over_log2 = 0.0;
  int k_class = 0;
  bool is_regular = false;
};

struct ScanOptions {
  int L = -1;                     // cut; -1 = n/2
  double class_threshold = 0.1;   // |dS/log2 - k| < threshold
  int threads = 1;                // 0 = auto
};

/// Ground plus every requested single excitation for each chain size.
/// modes = nullopt scans all n modes; an empty list yields no rows.
std::vector<ScanRow> scan_single_particle(const model::SpinChainModel& family,
                                          const std::vector<int>& sizes,
                                          const std::optional<std::vector<int>>& modes,
                                          const ScanOptions& opt = {});

struct ThreeScanResult {
  std::vector<ScanRow> rows;
  // per size: the two fixed reflection-antisymmetric modes (near momenta
  // pi/4 and 3pi/4) and the sweep indices skipped because they collide
  std::vector<std::array<int, 3>> fixed;  // {n, low mode, high mode}
  std::vector<std::pair<int, int>> skipped;  // (n, index)
};

/// Three-quasiparticle sweep b+_i b+_{hi} b+_{lo} |vac| with the fixed pair
/// chosen as the antisymmetric modes nearest momenta pi/4 and 3pi/4.
ThreeScanResult scan_three_particle(const model::SpinChainModel& family,
                                    const std::vector<int>& sizes,
                                    const std::optional<std::vector<int>>& sweep,
                                    const ScanOptions& opt = {});

struct ScalingFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // the points actually fitted
  std::vector<std::size_t> excluded;              // indices dropped (y <= 0)
};

/// Least-squares power law y = amplitude * n^exponent on log-log data.
ScalingFit fit_correction(const std::vector<std::pair<double, double>>& points);

struct Classification {
  int k = 0;
  bool is_regular = false;
};

/// Nearest quasiparticle count k = round(dS/log2); regular when
/// |dS/log2 - k| < threshold (default 0.1).
Classification classify_quasiparticles(double dS, double threshold = 0.1);

struct CorrelationLengthEstimate {
  double xi = 0.0;
  int fit_begin = 0;  // distance range used for the fit
  int fit_end = 0;
  double residual = 0.0;
};

/// Exponential fit of the vacuum Majorana two-point decay over an interior
/// window (10% of sites excluded at each edge). Throws GaplessModelError
/// when the single-particle spectrum looks gapless at this size.
CorrelationLengthEstimate estimate_xi(const model::MajoranaQuadraticForm& form);

}  // namespace quasient::analysis
