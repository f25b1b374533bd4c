#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace quasient::detail {

/// Deterministic standard normal via Box-Muller on raw mt19937_64 output,
/// independent of the standard library's distribution implementations.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

  std::complex<double> complex_normal() {
    return {(*this)() / std::numbers::sqrt2, (*this)() / std::numbers::sqrt2};
  }

 private:
  double uniform_open() {
    // in (0, 1]: avoids log(0)
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace quasient::detail
