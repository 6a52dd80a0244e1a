#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ngkde {

//! One bivariate observation on the support R x [0, inf).
struct Obs2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

//! The five estimators: two classical-times-gamma-kernel products, two
//! normal-gamma kernel estimators and the classical Gaussian product.
enum class EstimatorKind {
  F1_ClassicalGamma1,
  F2_ClassicalGamma2,
  F3_NG_Theta1,
  F4_NG_Theta2,
  F5_ClassicalProduct,
};

inline constexpr EstimatorKind kAllKinds[] = {
    EstimatorKind::F1_ClassicalGamma1, EstimatorKind::F2_ClassicalGamma2,
    EstimatorKind::F3_NG_Theta1,       EstimatorKind::F4_NG_Theta2,
    EstimatorKind::F5_ClassicalProduct};

std::string to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(const std::string& tag);  // "f1".."f5"

//! Per-estimator smoothing parameters. Entries not used by a kind may stay
//! NaN; validate_bandwidths checks the ones a kind needs.
struct BandwidthVec {
  double h = std::numeric_limits<double>::quiet_NaN();
  double b = std::numeric_limits<double>::quiet_NaN();
  double b1 = std::numeric_limits<double>::quiet_NaN();
  double b2 = std::numeric_limits<double>::quiet_NaN();
  double h1 = std::numeric_limits<double>::quiet_NaN();
  double h2 = std::numeric_limits<double>::quiet_NaN();
};

//! Rectangular evaluation grid with midpoint-offset nodes. Nodes sit at
//! cell centres, so x2 = 0 is never evaluated exactly.
struct Grid2D {
  double x1_lo = 0.0;
  double x1_hi = 1.0;
  double x2_lo = 0.0;
  double x2_hi = 1.0;
  std::size_t nx = 1;
  std::size_t ny = 1;

  double dx() const { return (x1_hi - x1_lo) / static_cast<double>(nx); }
  double dy() const { return (x2_hi - x2_lo) / static_cast<double>(ny); }
  double cell_area() const { return dx() * dy(); }
  double node_x1(std::size_t i) const {
    return x1_lo + dx() * (static_cast<double>(i) + 0.5);
  }
  double node_x2(std::size_t j) const {
    return x2_lo + dy() * (static_cast<double>(j) + 0.5);
  }
  std::size_t size() const { return nx * ny; }

  void validate() const {
    if (!(x1_lo < x1_hi) || !(x2_lo < x2_hi))
      throw std::invalid_argument("Grid2D: box must have positive extent");
    if (x2_lo < 0.0)
      throw std::invalid_argument("Grid2D: x2_lo must be >= 0");
    if (nx == 0 || ny == 0)
      throw std::invalid_argument("Grid2D: node counts must be positive");
  }
};

struct SurfaceMeta {
  EstimatorKind kind = EstimatorKind::F5_ClassicalProduct;
  BandwidthVec bw;
};

//! Densities evaluated on a grid; values are row-major with x1 as the major
//! index: values[i * grid.ny + j] = density at (node_x1(i), node_x2(j)).
struct DensitySurface {
  Grid2D grid;
  std::vector<double> values;
  SurfaceMeta meta;

  double at(std::size_t i, std::size_t j) const {
    return values[i * grid.ny + j];
  }
  //! Midpoint-rule integral of the surface over its box.
  double integral() const {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc * grid.cell_area();
  }
};

}  // namespace ngkde
