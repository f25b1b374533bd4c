#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "quasient/analysis.hpp"
#include "quasient/errors.hpp"
#include "quasient/freefermion.hpp"
#include "quasient/model.hpp"

using namespace quasient;

namespace {
constexpr double kLog2 = std::numbers::ln2;
}

TEST_SUITE("analysis") {

TEST_CASE("fit_correction recovers exact power laws") {
  SUBCASE("c / n") {
    std::vector<std::pair<double, double>> pts;
    for (int n : {64, 128, 256, 512}) pts.emplace_back(n, 0.37 / n);
    const auto fit = analysis::fit_correction(pts);
    CHECK(fit.exponent == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(fit.amplitude == doctest::Approx(0.37).epsilon(1e-6));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.excluded.empty());
  }
  SUBCASE("c / sqrt(n)") {
    std::vector<std::pair<double, double>> pts;
    for (int n : {64, 128, 256, 512}) pts.emplace_back(n, 1.2 / std::sqrt(double(n)));
    const auto fit = analysis::fit_correction(pts);
    CHECK(fit.exponent == doctest::Approx(-0.5).epsilon(1e-6));
  }
  SUBCASE("nonpositive deviations are excluded and flagged") {
    std::vector<std::pair<double, double>> pts = {
        {64, 0.1}, {128, 0.05}, {256, -1e-12}, {512, 0.0125}};
    const auto fit = analysis::fit_correction(pts);
    REQUIRE(fit.excluded.size() == 1);
    CHECK(fit.excluded[0] == 2);
    CHECK(fit.exponent == doctest::Approx(-1.0).epsilon(1e-6));
  }
  SUBCASE("too few usable points is an error") {
    CHECK_THROWS_AS(analysis::fit_correction({{64, 0.1}, {128, -0.1}}), NumericalError);
  }
}

TEST_CASE("classify_quasiparticles follows the threshold rule") {
  CHECK(analysis::classify_quasiparticles(kLog2).k == 1);
  CHECK(analysis::classify_quasiparticles(kLog2).is_regular);
  CHECK(analysis::classify_quasiparticles(0.0).k == 0);
  CHECK(analysis::classify_quasiparticles(0.0).is_regular);
  const auto bound = analysis::classify_quasiparticles(2.3 * kLog2);
  CHECK(bound.k == 2);
  CHECK_FALSE(bound.is_regular);
  // scale consistency across k
  for (int k = 0; k <= 5; ++k) {
    const auto c = analysis::classify_quasiparticles(k * kLog2);
    CHECK(c.k == k);
    CHECK(c.is_regular);
  }
  // configurable threshold
  CHECK(analysis::classify_quasiparticles(1.2 * kLog2, 0.25).is_regular);
  CHECK_FALSE(analysis::classify_quasiparticles(1.2 * kLog2, 0.1).is_regular);
  CHECK_THROWS_AS(analysis::classify_quasiparticles(-0.5), ConfigError);
}

TEST_CASE("scan_single_particle rows are consistent with direct evaluation") {
  const auto family = model::make_xy(1.0, 2.0, 8);
  const auto rows =
      analysis::scan_single_particle(family, {8, 12}, std::nullopt, {});
  REQUIRE(rows.size() == 20);

  int idx = 0;
  for (int n : {8, 12}) {
    const auto basis =
        freefermion::diagonalize(model::build_xy_majorana(model::make_xy(1.0, 2.0, n)));
    for (int k = 0; k < n; ++k, ++idx) {
      const auto& r = rows[idx];
      CHECK(r.n == n);
      CHECK(r.L == n / 2);
      REQUIRE(r.modes.size() == 1);
      CHECK(r.modes[0] == k);
      const double want = freefermion::excess_entropy(basis, {{k}});
      CHECK(std::abs(r.dS - want) <= 1e-12);
      CHECK(std::abs(r.dS - (r.S_excited - r.S_ground)) <= 1e-15);
      CHECK(std::abs(r.dS_over_log2 - r.dS / kLog2) <= 1e-15);
      CHECK(r.dS <= kLog2 + 1e-9);
      CHECK(r.reflection == basis.reflection_parity[k]);
      CHECK(r.parity == basis.state_parity(1));
      REQUIRE(r.momentum.size() == 1);
      CHECK(r.momentum[0] == basis.momentum(k));
    }
  }

  // empty selector yields no rows; explicit list restricts the scan
  CHECK(analysis::scan_single_particle(family, {8}, std::vector<int>{}, {}).empty());
  const auto two = analysis::scan_single_particle(family, {8}, std::vector<int>{1, 3}, {});
  REQUIRE(two.size() == 2);
  CHECK(two[0].modes[0] == 1);
  CHECK(two[1].modes[0] == 3);
  CHECK_THROWS_AS(
      analysis::scan_single_particle(model::make_tilted_ising(1, 1, 1, 8), {8}, std::nullopt, {}),
      ConfigError);
}

TEST_CASE("reflection classes interleave and rise monotonically at figure resolution") {
  analysis::ScanOptions opt;
  opt.threads = 0;
  const auto rows =
      analysis::scan_single_particle(model::make_xy(0.5, 0.9, 128), {128}, std::nullopt, opt);
  REQUIRE(rows.size() == 128);

  // interleaving: adjacent resolved labels alternate away from the band edges
  for (std::size_t k = 14; k + 14 < rows.size(); ++k) {
    if (rows[k].reflection == 0 || rows[k - 1].reflection == 0) continue;
    CHECK(rows[k].reflection == -rows[k - 1].reflection);
  }

  // each class band is monotone over its lowest half at figure resolution
  // (the antisymmetric band hugs log 2 with ~1e-4 wiggles, hence the slack)
  for (int cls : {+1, -1}) {
    double prev = -1e300;
    int count = 0;
    for (const auto& r : rows) {
      if (r.reflection != cls) continue;
      if (++count > 32) break;
      CHECK(r.dS >= prev - 1e-3);
      prev = r.dS;
    }
  }
}

TEST_CASE("scan_three_particle pins the antisymmetric pair and skips collisions") {
  analysis::ScanOptions opt;
  opt.threads = 0;
  const auto res =
      analysis::scan_three_particle(model::make_xy(1.0, 2.0, 64), {64}, std::nullopt, opt);
  REQUIRE(res.fixed.size() == 1);
  const int lo = res.fixed[0][1];
  const int hi = res.fixed[0][2];
  CHECK(res.rows.size() == 62);  // two sweep indices collide with the fixed pair
  REQUIRE(res.skipped.size() == 2);
  CHECK(res.skipped[0].second == lo);
  CHECK(res.skipped[1].second == hi);

  const auto basis =
      freefermion::diagonalize(model::build_xy_majorana(model::make_xy(1.0, 2.0, 64)));
  CHECK(basis.reflection_parity[lo] == -1);
  CHECK(basis.reflection_parity[hi] == -1);
  CHECK(std::abs(basis.momentum(lo) - std::numbers::pi / 4) <= 0.1);
  CHECK(std::abs(basis.momentum(hi) - 3 * std::numbers::pi / 4) <= 0.1);

  for (const auto& r : res.rows) {
    REQUIRE(r.modes.size() == 3);
    CHECK(std::abs(r.dS - (r.S_excited - r.S_ground)) <= 1e-15);
  }

  // empty sweep list
  const auto none =
      analysis::scan_three_particle(model::make_xy(1.0, 2.0, 64), {64}, std::vector<int>{}, opt);
  CHECK(none.rows.empty());
}

TEST_CASE("regular scan rows obey the k log 2 window at n = 256") {
  analysis::ScanOptions opt;
  opt.threads = 0;
  const auto singles =
      analysis::scan_single_particle(model::make_xy(0.5, 0.9, 256), {256}, std::nullopt, opt);
  const auto threes =
      analysis::scan_three_particle(model::make_xy(1.0, 2.0, 256), {256}, std::nullopt, opt);
  auto check_rows = [](const std::vector<analysis::ScanRow>& rows) {
    for (const auto& r : rows) {
      if (!r.is_regular) continue;
      CHECK(r.dS >= -1e-9);  // numerical zero for the flagged boundary mode
      CHECK(r.dS <= static_cast<double>(r.modes.size()) * kLog2 + 0.1);
    }
  };
  check_rows(singles);
  check_rows(threes.rows);
}

TEST_CASE("scan results do not depend on the worker count") {
  analysis::ScanOptions serial, parallel;
  serial.threads = 1;
  parallel.threads = 4;
  const auto family = model::make_xy(0.5, 0.9, 32);
  const auto a = analysis::scan_single_particle(family, {32}, std::nullopt, serial);
  const auto b = analysis::scan_single_particle(family, {32}, std::nullopt, parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].dS == b[i].dS);  // bit-identical
    CHECK(a[i].S_excited == b[i].S_excited);
  }
}

TEST_CASE("correlation length: stable for gapped chains, errors for gapless input") {
  const auto e256 = analysis::estimate_xi(model::build_xy_majorana(model::make_xy(1.0, 2.0, 256)));
  const auto e512 = analysis::estimate_xi(model::build_xy_majorana(model::make_xy(1.0, 2.0, 512)));
  CHECK(e256.xi > 0.0);
  CHECK(std::abs(e256.xi - e512.xi) <= 0.1 * e512.xi);
  CHECK(e256.fit_end > e256.fit_begin);

  CHECK_THROWS_AS(analysis::estimate_xi(model::build_xy_majorana(model::make_xy(1.0, 1.0, 256))),
                  GaplessModelError);

  // decoupled sites: correlations die within a site; smallest resolvable xi
  const int n = 64;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    A(2 * j, 2 * j + 1) = -0.55;
    A(2 * j + 1, 2 * j) = 0.55;
  }
  const auto dec = analysis::estimate_xi(model::MajoranaQuadraticForm{A, n});
  CHECK(dec.xi <= 0.05);
  CHECK(dec.xi > 0.0);
}

}  // TEST_SUITE
