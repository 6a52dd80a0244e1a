#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ngkde/types.hpp"

namespace ngkde {

enum class MarginFamily {
  Normal,
  Cauchy,
  HalfNormal,
  Gamma,
  Exponential,
  Logistic,
  TruncatedNormalAtZero,
};

std::string to_string(MarginFamily family);
MarginFamily parse_margin_family(const std::string& name);

//! One mixture component of a margin. `scale` is the parameter printed as
//! "s" for its family: sd for Normal/TruncatedNormalAtZero, Cauchy scale,
//! logistic scale, sigma of the underlying normal for HalfNormal, gamma
//! scale. `shape` applies to Gamma, `rate` to Exponential.
struct MarginComponent {
  MarginFamily family = MarginFamily::Normal;
  double location = 0.0;
  double scale = 1.0;
  double shape = 1.0;
  double rate = 1.0;
  double weight = 1.0;
};

//! A product-form bivariate target: a mixture on the real margin times a
//! mixture on the nonnegative margin, with the box used for ISE quadrature.
struct TargetSpec {
  std::string name;
  std::vector<MarginComponent> margin_x1;
  std::vector<MarginComponent> margin_x2;
  double x1_lo = -1.0;
  double x1_hi = 1.0;
  double x2_lo = 0.0;
  double x2_hi = 1.0;

  Grid2D grid(std::size_t nx, std::size_t ny) const {
    Grid2D g{x1_lo, x1_hi, x2_lo, x2_hi, nx, ny};
    g.validate();
    return g;
  }
  void validate() const;
};

//! The four simulation targets, by id "f1".."f4".
TargetSpec builtin_target(const std::string& id);

double margin_pdf(const MarginComponent& c, double x);
double target_pdf(const TargetSpec& spec, const Obs2& x);

//! n independent seeded draws; component picked by weight, then drawn by
//! the family sampler (Cauchy by inverse cdf, HalfNormal as |normal|,
//! truncated normal by rejection). Deterministic for a fixed seed.
std::vector<Obs2> target_sample(const TargetSpec& spec, std::uint64_t seed,
                                std::size_t n);

std::string target_to_json(const TargetSpec& spec);
TargetSpec target_from_json(const std::string& text);

}  // namespace ngkde
