#include "ngkde/math.hpp"

#include <array>
#include <limits>

namespace ngkde {

namespace {

// Lanczos coefficients for g = 7, n = 9 (Godfrey's set).
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};

double log_gamma_core(double z) {
  // valid for z >= 0.5
  double a = kLanczos[0];
  for (int k = 1; k < 9; ++k) {
    a += kLanczos[k] / (z - 1.0 + static_cast<double>(k));
  }
  const double t = z + 6.5;  // z + g - 0.5
  return 0.5 * std::log(2.0 * pi) + (z - 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace

double log_gamma(double z) {
  if (std::isnan(z)) return z;
  if (z <= 0.0 && z == std::floor(z)) {
    return std::numeric_limits<double>::infinity();  // poles
  }
  if (z < 0.5) {
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(pi / std::abs(std::sin(pi * z))) - log_gamma_core(1.0 - z);
  }
  return log_gamma_core(z);
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer applied to a counter offset of the master seed
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace ngkde
