#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ngkde {

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt2pi = 2.506628274631000502415765284811;
inline constexpr double inv_sqrt2pi = 0.39894228040143267793994605993438;

//! Log-gamma via the Lanczos approximation (g=7, 9 terms), accurate to
//! ~15 significant digits over the positive axis. Thread-safe, unlike the
//! libm lgamma which writes the global signgam.
double log_gamma(double z);

//! Standard normal density.
inline double gaussian_kernel(double t) {
  return inv_sqrt2pi * std::exp(-0.5 * t * t);
}

//! Second moment and squared-integral of the standard normal kernel:
//! k2 = 1, k3 = 1/(2*sqrt(pi)).
struct GaussianConstants {
  double k2;
  double k3;
};
inline GaussianConstants gaussian_constants() {
  return {1.0, 0.5 / std::sqrt(pi)};
}

//! Standard normal cdf.
inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

//! Counter-based seed derivation: replication r of a master seed gets its
//! own generator seed, reproducible in isolation.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

}  // namespace ngkde
