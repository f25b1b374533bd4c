#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "quasient/ed.hpp"
#include "quasient/errors.hpp"
#include "quasient/mpsx.hpp"
#include "quasient/version.hpp"

namespace quasient::cli {

namespace {

using json = nlohmann::ordered_json;

int resolve_threads(int flag_value) {
  if (flag_value >= 0) return flag_value;
  if (const char* env = std::getenv("QUASIENT_THREADS")) {
    try {
      return std::max(0, std::stoi(env));
    } catch (...) {
      throw ConfigError("QUASIENT_THREADS is not an integer");
    }
  }
  return 1;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_floats(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_float(v[i]);
  }
  return out;
}

std::size_t write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return text.size();
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open output file: " + path);
  os << text;
  if (!os) throw Error("write failed: " + path);
  return text.size();
}

// Generic table writer used by the non-scan subcommands.
std::size_t write_table(const std::vector<std::string>& columns,
                        const std::vector<std::vector<std::string>>& rows,
                        const std::string& format, const std::string& path,
                        const Metadata& metadata) {
  if (format == "csv") {
    std::ostringstream os;
    for (const auto& [k, v] : metadata) os << "# " << k << ": " << v << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c)
      os << columns[c] << (c + 1 < columns.size() ? "," : "");
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c)
        os << row[c] << (c + 1 < row.size() ? "," : "");
      os << "\n";
    }
    return write_text(os.str(), path);
  }
  if (format == "json") {
    json doc;
    json meta = json::object();
    for (const auto& [k, v] : metadata) meta[k] = v;
    doc["metadata"] = meta;
    doc["rows"] = json::array();
    for (const auto& row : rows) {
      json r = json::object();
      for (std::size_t c = 0; c < row.size() && c < columns.size(); ++c)
        r[columns[c]] = row[c];
      doc["rows"].push_back(r);
    }
    return write_text(doc.dump(2) + "\n", path);
  }
  throw ConfigError("unknown output format: " + format);
}

const std::vector<std::string> kScanColumns = {
    "model", "n", "L", "boundary", "modes", "reflection", "parity", "momentum",
    "S_ground", "S_excited", "dS", "dS_over_log2", "k_class", "is_regular"};

Metadata base_metadata(const std::string& command) {
  Metadata md;
  md.emplace_back("quasient-version", kVersion);
  md.emplace_back("command", command);
  md.emplace_back("boundary-convention", "open chains for all free-fermion runs");
  md.emplace_back("nu-clamp-tolerance", "1e-9");
  md.emplace_back("entropy-log-base", "e");
  return md;
}

struct CommonOpts {
  std::string out = "-";
  std::string format = "csv";
  int threads_flag = -1;
  std::uint64_t seed = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--out", out, "Output path ('-' = stdout)");
    cmd->add_option("--format", format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", threads_flag,
                    "Worker threads (0 = auto; default: QUASIENT_THREADS or 1)");
    cmd->add_option("--seed", seed, "Random seed for stochastic subcommands");
  }

  void record(Metadata& md) const {
    md.emplace_back("seed", std::to_string(seed));
    md.emplace_back("threads", std::to_string(resolve_threads(threads_flag)));
    md.emplace_back("format", format);
  }
};

void validate_scan_sizes(std::vector<int>& sizes) {
  if (sizes.empty()) throw ConfigError("at least one chain size is required");
  for (int n : sizes) {
    if (n < 4 || n % 2 != 0)
      throw ConfigError("chain sizes must be even and >= 4 for half cuts, got " +
                        std::to_string(n));
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int cmd_xy_scan(double gamma, double h, std::vector<int> sizes,
                const std::string& modes_arg, double threshold, const CommonOpts& common) {
  validate_scan_sizes(sizes);
  std::optional<std::vector<int>> modes;
  if (modes_arg != "all") {
    std::vector<int> list;
    std::stringstream ss(modes_arg);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) list.push_back(std::stoi(tok));
    modes = std::move(list);
  }

  analysis::ScanOptions opt;
  opt.class_threshold = threshold;
  opt.threads = resolve_threads(common.threads_flag);
  const auto family = model::make_xy(gamma, h, sizes.front());
  const auto rows = analysis::scan_single_particle(family, sizes, modes, opt);

  Metadata md = base_metadata("xy-scan");
  md.emplace_back("model", family.name());
  md.emplace_back("sizes", join_ints(sizes));
  md.emplace_back("modes", modes_arg);
  md.emplace_back("classifier-threshold", format_float(threshold));
  common.record(md);
  emit(rows, common.format, common.out, md);
  return 0;
}

int cmd_three_scan(double gamma, double h, std::vector<int> sizes, double threshold,
                   const CommonOpts& common) {
  validate_scan_sizes(sizes);
  analysis::ScanOptions opt;
  opt.class_threshold = threshold;
  opt.threads = resolve_threads(common.threads_flag);
  const auto family = model::make_xy(gamma, h, sizes.front());
  const auto result = analysis::scan_three_particle(family, sizes, std::nullopt, opt);

  Metadata md = base_metadata("three-scan");
  md.emplace_back("model", family.name());
  md.emplace_back("sizes", join_ints(sizes));
  md.emplace_back("classifier-threshold", format_float(threshold));
  md.emplace_back("peak-exclusion-window", "|i - fixed| > n/16");
  for (const auto& f : result.fixed) {
    md.emplace_back("fixed-modes-n" + std::to_string(f[0]),
                    std::to_string(f[1]) + ";" + std::to_string(f[2]));
    std::string skipped;
    for (const auto& [n, i] : result.skipped) {
      if (n != f[0]) continue;
      if (!skipped.empty()) skipped += ';';
      skipped += std::to_string(i);
    }
    if (!skipped.empty())
      md.emplace_back("skipped-collisions-n" + std::to_string(f[0]), skipped);
  }
  common.record(md);
  emit(result.rows, common.format, common.out, md);
  return 0;
}

int cmd_ed_excess(const model::SpinChainModel& m, int M, double threshold,
                  const CommonOpts& common) {
  if (m.n < 4 || m.n % 2 != 0)
    throw ConfigError("ed-excess: n must be even and >= 4 for the half cut");
  const auto table = ed::excess_table(m, M);

  std::vector<analysis::ScanRow> rows;
  rows.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    analysis::ScanRow r;
    r.model = m.name();
    r.n = m.n;
    r.L = m.n / 2;
    r.boundary = m.boundary;
    r.modes = {static_cast<int>(i)};  // eigenstate index, not a mode set
    r.reflection = table[i].reflection.value_or(0);
    r.parity = table[i].parity.value_or(0);
    r.S_ground = table[0].S;
    r.S_excited = table[i].S;
    r.dS = table[i].dS;
    r.dS_over_log2 = r.dS / std::numbers::ln2;
    const auto cls = analysis::classify_quasiparticles(std::max(r.dS, 0.0), threshold);
    r.k_class = cls.k;
    r.is_regular = cls.is_regular;
    rows.push_back(std::move(r));
  }

  Metadata md = base_metadata("ed-excess");
  md.emplace_back("model", m.name());
  md.emplace_back("n", std::to_string(m.n));
  md.emplace_back("boundary", model::to_string(m.boundary));
  md.emplace_back("states", std::to_string(M));
  md.emplace_back("classifier-threshold", format_float(threshold));
  md.emplace_back("modes-column", "eigenstate index");
  common.record(md);
  emit(rows, common.format, common.out, md);
  return 0;
}

int cmd_ed_compare(double gamma, double h, int n, int M, const CommonOpts& common) {
  if (n < 4 || n % 2 != 0)
    throw ConfigError("ed-compare: n must be even and >= 4 for the half cut");
  const auto m = model::make_xy(gamma, h, n);
  const auto basis = freefermion::diagonalize(model::build_xy_majorana(m));
  const auto table = ed::excess_table(m, M);

  // enumerate free-fermion subset energies up to 4 quasiparticles
  struct Pred {
    double energy;
    std::vector<int> modes;
  };
  std::vector<Pred> preds;
  preds.push_back({basis.ground_energy, {}});
  for (int a = 0; a < n; ++a) {
    preds.push_back({basis.ground_energy + basis.epsilon(a), {a}});
    for (int b = a + 1; b < n; ++b) {
      preds.push_back({basis.ground_energy + basis.epsilon(a) + basis.epsilon(b), {a, b}});
      for (int c = b + 1; c < n; ++c) {
        preds.push_back({basis.ground_energy + basis.epsilon(a) + basis.epsilon(b) +
                             basis.epsilon(c),
                         {a, b, c}});
        for (int e = c + 1; e < n && n <= 12; ++e)
          preds.push_back({basis.ground_energy + basis.epsilon(a) + basis.epsilon(b) +
                               basis.epsilon(c) + basis.epsilon(e),
                           {a, b, c, e}});
      }
    }
  }

  const double escale = std::max(std::abs(basis.ground_energy), 1.0);
  double max_diff = 0.0;
  int unmatched = 0;
  std::vector<std::vector<std::string>> out_rows;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Pred* best = nullptr;
    double bestd = 1e300;
    for (const auto& p : preds) {
      const double dd = std::abs(p.energy - table[i].energy);
      if (dd < bestd) {
        bestd = dd;
        best = &p;
      }
    }
    std::string modes = "?";
    std::string s_ff = "";
    std::string diff = "";
    if (best && bestd < 1e-6 * escale) {
      modes = join_ints(best->modes);
      const double sf = freefermion::spectrum_from_gamma(
                            freefermion::correlation_excited(
                                basis, freefermion::ExcitationSpec{best->modes}, n / 2))
                            .entropy;
      s_ff = format_float(sf);
      const double d = std::abs(sf - table[i].S);
      diff = format_float(d);
      max_diff = std::max(max_diff, d);
    } else {
      ++unmatched;
    }
    out_rows.push_back({std::to_string(i), format_float(table[i].energy), modes,
                        format_float(table[i].S), s_ff, diff});
  }

  Metadata md = base_metadata("ed-compare");
  md.emplace_back("model", m.name());
  md.emplace_back("n", std::to_string(n));
  md.emplace_back("states", std::to_string(M));
  md.emplace_back("max-abs-entropy-diff", format_float(max_diff));
  md.emplace_back("unmatched-states", std::to_string(unmatched));
  common.record(md);
  write_table({"state", "energy", "modes", "S_ed", "S_fermion", "abs_diff"}, out_rows,
              common.format, common.out, md);
  return 0;
}

int cmd_mps_check(int D, int draws, std::vector<double> kappas, const CommonOpts& common) {
  if (D < 1 || D > mpsx::kBondCap) throw ConfigError("mps-check: bond dimension out of range");
  if (draws < 1) throw ConfigError("mps-check: draws must be >= 1");
  if (kappas.empty()) kappas = {std::numbers::pi / 2.0};  // one line per draw

  std::vector<std::vector<std::string>> rows;
  double worst_identity = 0.0, worst_spectrum = 0.0;
  for (int t = 0; t < draws; ++t) {
    const auto ump = mpsx::random_uniform_mps(2, D, common.seed + 1000003ull * t);
    const auto gs = mpsx::ground_spectrum(ump);
    for (double kappa : kappas) {
      const auto braw = mpsx::random_tensor(2, D, common.seed + 1000003ull * t + 17);
      const auto exc = mpsx::gauge_fix(ump, braw, kappa);
      const auto [spec, entropy] = mpsx::excitation_spectrum(ump, exc);
      const double identity_err = std::abs(entropy - gs.entropy - std::numbers::ln2);
      double spectrum_err = 0.0;
      for (int i = 0; i < gs.eigenvalues.size(); ++i) {
        spectrum_err = std::max(spectrum_err,
                                std::abs(spec(2 * i) - 0.5 * gs.eigenvalues(i)));
        spectrum_err = std::max(spectrum_err,
                                std::abs(spec(2 * i + 1) - 0.5 * gs.eigenvalues(i)));
      }
      worst_identity = std::max(worst_identity, identity_err);
      worst_spectrum = std::max(worst_spectrum, spectrum_err);
      rows.push_back({std::to_string(t), std::to_string(D), format_float(kappa),
                      format_float(identity_err), format_float(spectrum_err)});
    }
  }

  Metadata md = base_metadata("mps-check");
  md.emplace_back("bond-dimension", std::to_string(D));
  md.emplace_back("draws", std::to_string(draws));
  md.emplace_back("worst-identity-error", format_float(worst_identity));
  md.emplace_back("worst-spectrum-error", format_float(worst_spectrum));
  common.record(md);
  write_table({"draw", "D", "kappa", "identity_error", "spectrum_error"}, rows,
              common.format, common.out, md);
  return 0;
}

int cmd_scaling(double gamma, double h, std::vector<int> sizes, const CommonOpts& common) {
  validate_scan_sizes(sizes);
  if (sizes.size() < 3) throw ConfigError("scaling: need at least 3 sizes");

  std::vector<std::vector<std::string>> rows;
  Metadata md = base_metadata("scaling");
  for (int cls : {+1, -1}) {
    std::vector<std::pair<double, double>> points;
    for (int n : sizes) {
      const auto m = model::make_xy(gamma, h, n);
      const auto basis = freefermion::diagonalize(model::build_xy_majorana(m));
      int best = -1;
      double dist = 1e300;
      for (int k = 0; k < n; ++k) {
        if (basis.reflection_parity[k] != cls) continue;
        const double d = std::abs(basis.momentum(k) - std::numbers::pi / 2.0);
        if (d < dist) {
          dist = d;
          best = k;
        }
      }
      if (best < 0) throw NumericalError("scaling: no mode in the requested class");
      const double dS =
          freefermion::excess_entropy(basis, freefermion::ExcitationSpec{{best}}, n / 2);
      points.emplace_back(n, std::numbers::ln2 - dS);
    }
    const auto fit = analysis::fit_correction(points);
    std::string pts;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i) pts += ';';
      pts += format_float(points[i].first) + ":" + format_float(points[i].second);
    }
    rows.push_back({cls > 0 ? "+1" : "-1", format_float(fit.exponent),
                    format_float(fit.amplitude), format_float(fit.r_squared), pts});
  }
  md.emplace_back("model", model::make_xy(gamma, h, sizes.front()).name());
  md.emplace_back("sizes", join_ints(sizes));
  md.emplace_back("mode-selection", "nearest momentum pi/2 within each reflection class");
  common.record(md);
  write_table({"class", "exponent", "amplitude", "r_squared", "points"}, rows,
              common.format, common.out, md);
  return 0;
}

int cmd_xi(double gamma, double h, int n, const CommonOpts& common) {
  const auto m = model::make_xy(gamma, h, n);
  const auto est = analysis::estimate_xi(model::build_xy_majorana(m));

  Metadata md = base_metadata("xi");
  md.emplace_back("model", m.name());
  md.emplace_back("n", std::to_string(n));
  common.record(md);
  write_table({"model", "n", "xi", "fit_begin", "fit_end", "residual"},
              {{m.name(), std::to_string(n), format_float(est.xi),
                std::to_string(est.fit_begin), std::to_string(est.fit_end),
                format_float(est.residual)}},
              common.format, common.out, md);
  return 0;
}

}  // namespace

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::size_t emit(const std::vector<analysis::ScanRow>& rows, const std::string& format,
                 const std::string& path, const Metadata& metadata) {
  if (format == "csv") {
    std::ostringstream os;
    for (const auto& [k, v] : metadata) os << "# " << k << ": " << v << "\n";
    for (std::size_t c = 0; c < kScanColumns.size(); ++c)
      os << kScanColumns[c] << (c + 1 < kScanColumns.size() ? "," : "");
    os << "\n";
    for (const auto& r : rows) {
      os << r.model << ',' << r.n << ',' << r.L << ',' << model::to_string(r.boundary)
         << ',' << join_ints(r.modes) << ',' << r.reflection << ',' << r.parity << ','
         << join_floats(r.momentum) << ',' << format_float(r.S_ground) << ','
         << format_float(r.S_excited) << ',' << format_float(r.dS) << ','
         << format_float(r.dS_over_log2) << ',' << r.k_class << ','
         << (r.is_regular ? "true" : "false") << "\n";
    }
    return write_text(os.str(), path);
  }
  if (format == "json") {
    json doc;
    json meta = json::object();
    for (const auto& [k, v] : metadata) meta[k] = v;
    doc["metadata"] = meta;
    doc["rows"] = json::array();
    for (const auto& r : rows) {
      json row = json::object();
      row["model"] = r.model;
      row["n"] = r.n;
      row["L"] = r.L;
      row["boundary"] = model::to_string(r.boundary);
      row["modes"] = r.modes;
      row["reflection"] = r.reflection;
      row["parity"] = r.parity;
      row["momentum"] = r.momentum;
      row["S_ground"] = r.S_ground;
      row["S_excited"] = r.S_excited;
      row["dS"] = r.dS;
      row["dS_over_log2"] = r.dS_over_log2;
      row["k_class"] = r.k_class;
      row["is_regular"] = r.is_regular;
      doc["rows"].push_back(row);
    }
    return write_text(doc.dump(2) + "\n", path);
  }
  throw ConfigError("emit: unknown output format: " + format);
}

std::vector<analysis::ScanRow> parse_rows_json(const std::string& text) {
  const json doc = json::parse(text);
  std::vector<analysis::ScanRow> rows;
  for (const auto& jr : doc.at("rows")) {
    analysis::ScanRow r;
    r.model = jr.at("model").get<std::string>();
    r.n = jr.at("n").get<int>();
    r.L = jr.at("L").get<int>();
    r.boundary = jr.at("boundary").get<std::string>() == "open"
                     ? model::Boundary::open
                     : model::Boundary::periodic;
    r.modes = jr.at("modes").get<std::vector<int>>();
    r.reflection = jr.at("reflection").get<int>();
    r.parity = jr.at("parity").get<int>();
    r.momentum = jr.at("momentum").get<std::vector<double>>();
    r.S_ground = jr.at("S_ground").get<double>();
    r.S_excited = jr.at("S_excited").get<double>();
    r.dS = jr.at("dS").get<double>();
    r.dS_over_log2 = jr.at("dS_over_log2").get<double>();
    r.k_class = jr.at("k_class").get<int>();
    r.is_regular = jr.at("is_regular").get<bool>();
    rows.push_back(std::move(r));
  }
  return rows;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"quasient: excess-of-entanglement laboratory for 1D quantum chains"};
  // long-only help so the physics flag --h stays available
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file (flags take precedence)");
  auto add_subcommand = [&](const std::string& name, const std::string& desc) {
    auto* cmd = app.add_subcommand(name, desc);
    cmd->set_help_flag("--help", "print help");
    return cmd;
  };

  // xy-scan
  auto* xy = add_subcommand("xy-scan", "Single-quasiparticle excess scan of an XY chain");
  double xy_gamma = 0.5, xy_h = 0.9, xy_threshold = 0.1;
  std::vector<int> xy_sizes;
  std::string xy_modes = "all";
  CommonOpts xy_common;
  xy->add_option("--gamma", xy_gamma, "XY anisotropy");
  xy->add_option("--h", xy_h, "transverse field");
  xy->add_option("--sizes", xy_sizes, "chain sizes")->delimiter(',')->required();
  xy->add_option("--modes", xy_modes, "'all' or comma-separated mode indices");
  xy->add_option("--class-threshold", xy_threshold, "regularity threshold");
  xy_common.attach(xy);

  // three-scan
  auto* three = add_subcommand("three-scan", "Three-quasiparticle sweep (Ising h=2 style)");
  double th_gamma = 1.0, th_h = 2.0, th_threshold = 0.1;
  std::vector<int> th_sizes;
  CommonOpts th_common;
  three->add_option("--gamma", th_gamma, "XY anisotropy");
  three->add_option("--h", th_h, "transverse field");
  three->add_option("--sizes", th_sizes, "chain sizes")->delimiter(',')->required();
  three->add_option("--class-threshold", th_threshold, "regularity threshold");
  th_common.attach(three);

  // ed-excess
  auto* edx = add_subcommand("ed-excess", "Excess table from exact diagonalization");
  std::string edx_model = "tilted";
  double edx_gamma = 1.0, edx_h = 2.0, edx_J = 1.0, edx_hz = 1.0, edx_hx = 1.0;
  double edx_threshold = 0.1;
  int edx_n = 10, edx_states = 16;
  bool edx_periodic = false;
  CommonOpts edx_common;
  edx->add_option("--model", edx_model, "tilted or xy")
      ->check(CLI::IsMember({"tilted", "xy"}));
  edx->add_option("--n", edx_n, "chain length")->required();
  edx->add_option("--states", edx_states, "number of eigenstates");
  edx->add_option("--gamma", edx_gamma, "XY anisotropy");
  edx->add_option("--h", edx_h, "XY transverse field");
  edx->add_option("--J", edx_J, "tilted Ising coupling");
  edx->add_option("--hz", edx_hz, "tilted Ising transverse field");
  edx->add_option("--hx", edx_hx, "tilted Ising longitudinal field");
  edx->add_flag("--periodic", edx_periodic, "periodic boundary (ED only)");
  edx->add_option("--class-threshold", edx_threshold, "regularity threshold");
  edx_common.attach(edx);

  // ed-compare
  auto* cmp = add_subcommand("ed-compare",
                                 "Free-fermion vs ED entanglement cross-check (XY)");
  double cmp_gamma = 1.0, cmp_h = 2.0;
  int cmp_n = 10, cmp_states = 8;
  std::string cmp_model = "xy";
  CommonOpts cmp_common;
  cmp->add_option("--model", cmp_model, "only 'xy' is quadratic")
      ->check(CLI::IsMember({"xy"}));
  cmp->add_option("--gamma", cmp_gamma, "XY anisotropy");
  cmp->add_option("--h", cmp_h, "transverse field");
  cmp->add_option("--n", cmp_n, "chain length")->required();
  cmp->add_option("--states", cmp_states, "number of ED states");
  cmp_common.attach(cmp);

  // mps-check
  auto* mps = add_subcommand("mps-check", "Excitation-ansatz entropy identity check");
  int mps_D = 4, mps_draws = 20;
  std::vector<double> mps_kappas;
  CommonOpts mps_common;
  mps->add_option("--bond-dim", mps_D, "bond dimension D");
  mps->add_option("--draws", mps_draws, "number of random draws");
  mps->add_option("--kappa", mps_kappas, "momenta (default pi/2)")->delimiter(',');
  mps_common.attach(mps);

  // scaling
  auto* sc = add_subcommand("scaling", "Power-law fit of log2 - dS vs n at momentum pi/2");
  double sc_gamma = 0.5, sc_h = 0.9;
  std::vector<int> sc_sizes;
  CommonOpts sc_common;
  sc->add_option("--gamma", sc_gamma, "XY anisotropy");
  sc->add_option("--h", sc_h, "transverse field");
  sc->add_option("--sizes", sc_sizes, "chain sizes (>= 3)")->delimiter(',')->required();
  sc_common.attach(sc);

  // xi
  auto* xi = add_subcommand("xi", "Correlation length estimate from vacuum correlations");
  double xi_gamma = 1.0, xi_h = 2.0;
  int xi_n = 256;
  CommonOpts xi_common;
  xi->add_option("--gamma", xi_gamma, "XY anisotropy");
  xi->add_option("--h", xi_h, "transverse field");
  xi->add_option("--n", xi_n, "chain length");
  xi_common.attach(xi);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", {{"type", "config"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 2;
  }

  try {
    if (xy->parsed())
      return cmd_xy_scan(xy_gamma, xy_h, xy_sizes, xy_modes, xy_threshold, xy_common);
    if (three->parsed())
      return cmd_three_scan(th_gamma, th_h, th_sizes, th_threshold, th_common);
    if (edx->parsed()) {
      model::SpinChainModel m =
          edx_model == "xy"
              ? model::make_xy(edx_gamma, edx_h, edx_n,
                               edx_periodic ? model::Boundary::periodic
                                            : model::Boundary::open)
              : model::make_tilted_ising(edx_J, edx_hz, edx_hx, edx_n,
                                         edx_periodic ? model::Boundary::periodic
                                                      : model::Boundary::open);
      return cmd_ed_excess(m, edx_states, edx_threshold, edx_common);
    }
    if (cmp->parsed()) return cmd_ed_compare(cmp_gamma, cmp_h, cmp_n, cmp_states, cmp_common);
    if (mps->parsed()) return cmd_mps_check(mps_D, mps_draws, mps_kappas, mps_common);
    if (sc->parsed()) return cmd_scaling(sc_gamma, sc_h, sc_sizes, sc_common);
    if (xi->parsed()) return cmd_xi(xi_gamma, xi_h, xi_n, xi_common);
    throw ConfigError("no subcommand given");
  } catch (const ConfigError& e) {
    std::cerr << nlohmann::json{{"error", {{"type", "config"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 2;
  } catch (const SizeCapError& e) {
    std::cerr << nlohmann::json{{"error", {{"type", "size-cap"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << nlohmann::json{{"error", {{"type", "numerical"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", {{"type", "internal"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 1;
  }
}

}  // namespace quasient::cli
