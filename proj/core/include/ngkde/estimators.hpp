#pragma once

#include <span>
#include <string>

#include "ngkde/kernels.hpp"
#include "ngkde/types.hpp"

namespace ngkde {

//! Throws unless every bandwidth entry the kind uses is present and > 0.
void validate_bandwidths(EstimatorKind kind, const BandwidthVec& bw);

//! Pointwise value of the chosen estimator at x. The associated kernels are
//! parameterized by the evaluation point and evaluated at the data points.
double evaluate(EstimatorKind kind, std::span<const Obs2> sample,
                const BandwidthVec& bw, const Obs2& x);

//! Estimator on every grid node. Node work may be split across `workers`
//! threads; per-node sums keep sample order, so the surface is bit-identical
//! to pointwise calls for any worker count.
DensitySurface evaluate_grid(EstimatorKind kind, std::span<const Obs2> sample,
                             const BandwidthVec& bw, const Grid2D& grid,
                             unsigned workers = 1);

//! Leave-one-out value at sample[i]: the estimator built from the other
//! n - 1 observations, evaluated at the held-out point.
double evaluate_loo(EstimatorKind kind, std::span<const Obs2> sample,
                    const BandwidthVec& bw, std::size_t i);

std::string surface_to_csv(const DensitySurface& surface);
std::string surface_to_json(const DensitySurface& surface);

namespace detail {
//! Shared node-block evaluator behind evaluate/evaluate_grid. Fills
//! out[i * ny + j] with the estimate at (xs1[i], xs2[j]).
void evaluate_block(EstimatorKind kind, std::span<const Obs2> sample,
                    const BandwidthVec& bw, std::span<const double> xs1,
                    std::span<const double> xs2, double* out);
}  // namespace detail

}  // namespace ngkde
