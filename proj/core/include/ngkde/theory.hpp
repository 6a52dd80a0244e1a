#pragma once

#include <functional>
#include <string>

#include "ngkde/bandwidth.hpp"
#include "ngkde/targets.hpp"

namespace ngkde {

//! Value and first/second partial derivatives of a target density at a
//! point, from second-order finite differences.
struct Partials2 {
  double f = 0.0;
  double f1 = 0.0;   // d/dx1
  double f2 = 0.0;   // d/dx2
  double f11 = 0.0;  // d2/dx1^2
  double f22 = 0.0;  // d2/dx2^2
  double f12 = 0.0;  // mixed
};

//! Finite-difference partials of target_pdf at x. Central stencils where a
//! 2*step margin fits inside the box, one-sided second-order stencils
//! otherwise (notably near x2 = 0). `step` <= 0 picks the default
//! 1e-4 times the box extent per axis.
Partials2 partials(const TargetSpec& target, const Obs2& x, double step = 0.0);

//! Leading bias term of the chosen estimator at x (F1-F4 only), including
//! the piecewise boundary branches of F2 and F4.
double bias_leading(EstimatorKind kind, const TargetSpec& target,
                    const Obs2& x, const BandwidthVec& bw);

//! Leading variance term at x for sample size n. Interior expressions are
//! used when the smoothing ratio exceeds the regime crossover (x2 > C b^2,
//! |x1| > C b1, x2 > C b2 with C = 20); otherwise the boundary-regime
//! constants with kappa taken at the evaluation point.
double variance_leading(EstimatorKind kind, const TargetSpec& target,
                        const Obs2& x, const BandwidthVec& bw, std::size_t n);

//! The asymptotic MISE summary of an estimator on a target: the squared
//! bias functional, the variance functional, and the optimal tied scale
//! and AMISE as functions of n.
struct AmiseReport {
  EstimatorKind kind = EstimatorKind::F1_ClassicalGamma1;
  double bias_functional = 0.0;      // integral of the braced bias term squared
  double variance_functional = 0.0;  // leading integrated-variance coefficient
  std::size_t n_ref = 0;

  double s0_opt(double n) const;
  double amise_opt(double n) const;
};

//! Evaluates the bias and variance functionals by midpoint quadrature on
//! the grid, with the x^(-1/2) factors integrated exactly per cell. Throws
//! if doubling the resolution moves a functional by more than 2%.
AmiseReport amise_report(EstimatorKind kind, const TargetSpec& target,
                         const Grid2D& grid, std::size_t n_ref = 100);

std::string amise_to_json(const AmiseReport& report);

namespace detail {
//! Exact integral of |x|^(-1/2) over the interval [lo, hi] (may straddle 0).
double sqrt_singular_weight(double lo, double hi);
}  // namespace detail

}  // namespace ngkde
