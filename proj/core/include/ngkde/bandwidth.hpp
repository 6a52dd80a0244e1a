#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ngkde/estimators.hpp"
#include "ngkde/targets.hpp"

namespace ngkde {

//! Coarse-scan-plus-golden-section search window for the smoothing scale.
struct ScalarSearchSpec {
  double lo = 0.02;
  double hi = 3.0;
  std::size_t coarse_points = 60;  // log-spaced, >= 8
  std::size_t refine_iters = 40;   // golden-section steps

  void validate() const {
    if (!(lo > 0.0) || !(lo < hi))
      throw std::invalid_argument("search window must satisfy 0 < lo < hi");
    if (coarse_points < 8)
      throw std::invalid_argument("search needs at least 8 coarse points");
  }
};

struct TracePoint {
  double s1 = 0.0;
  double s2 = 0.0;  // == s1 in tied mode
  double score = 0.0;
};

struct SelectionResult {
  double s1 = 0.0;  // smoothing scale of the x1 kernel
  double s2 = 0.0;  // smoothing scale of the x2 kernel; == s1 when tied
  bool tied = true;
  BandwidthVec bw;
  double score = 0.0;
  std::vector<TracePoint> trace;

  double s_opt() const { return s1; }
};

//! Equal-smoothing expansion: h = b = h1 = h2 = s and b1 = b2 = s^2.
BandwidthVec tie_bandwidths(double s);

//! Per-axis expansion on the common smoothing scale: (s1, s2) become
//! (h, b) for the classical-gamma estimators, (b1, b2) = (s1^2, s2^2) for
//! the NG estimators and (h1, h2) for the classical product.
BandwidthVec expand_bandwidths(EstimatorKind kind, double s1, double s2);

//! Midpoint-rule integral of (estimate - target)^2 over the grid, which
//! must lie inside the target's integration box.
double ise(EstimatorKind kind, std::span<const Obs2> sample,
           const BandwidthVec& bw, const TargetSpec& target,
           const Grid2D& grid);

//! Same integral for an already evaluated surface (any density source).
double ise(const DensitySurface& surface, const TargetSpec& target);

//! Minimizes s -> ise(kind, sample, tie_bandwidths(s), target, grid) by a
//! log-spaced coarse scan followed by golden-section refinement. Ties on
//! equal scores break toward the smaller s.
SelectionResult oracle_select(EstimatorKind kind, std::span<const Obs2> sample,
                              const TargetSpec& target, const Grid2D& grid,
                              const ScalarSearchSpec& search);

//! Per-axis oracle search: tied coarse scan to seed (s1, s2), then
//! coordinate-descent sweeps of golden-section refinement per axis.
SelectionResult oracle_select_2d(EstimatorKind kind,
                                 std::span<const Obs2> sample,
                                 const TargetSpec& target, const Grid2D& grid,
                                 const ScalarSearchSpec& search,
                                 std::size_t sweeps = 3);

//! Scale of the leave-one-out fidelity term. The printed 2/n^2 makes that
//! term O(1/n) of the roughness integral, so minimization drifts to the
//! oversmoothing edge of any window; the conventional 2/n is the default.
enum class LscvFactor {
  Paper,     // 2/n^2, as printed
  Standard,  // the conventional 2/n
};

//! Least-squares cross-validation score: the midpoint integral of the
//! squared estimate over the grid minus the leave-one-out sum scaled by
//! the chosen factor.
double lscv_score(EstimatorKind kind, std::span<const Obs2> sample,
                  const BandwidthVec& bw, const Grid2D& grid,
                  LscvFactor factor = LscvFactor::Standard);

SelectionResult lscv_select(EstimatorKind kind, std::span<const Obs2> sample,
                            const Grid2D& grid, const ScalarSearchSpec& search,
                            LscvFactor factor = LscvFactor::Standard);

SelectionResult lscv_select_2d(EstimatorKind kind,
                               std::span<const Obs2> sample, const Grid2D& grid,
                               const ScalarSearchSpec& search,
                               LscvFactor factor = LscvFactor::Standard,
                               std::size_t sweeps = 3);

//! Data bounding box padded by pad_scale on each side (x2 floored at 0),
//! with the given node counts; the default grid for LSCV on real data.
Grid2D lscv_default_grid(std::span<const Obs2> sample, double pad_scale,
                         std::size_t nx = 151, std::size_t ny = 151);

std::string selection_to_json(const SelectionResult& result);

}  // namespace ngkde
