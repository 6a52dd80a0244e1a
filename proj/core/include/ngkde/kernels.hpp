#pragma once

#include "ngkde/math.hpp"
#include "ngkde/types.hpp"

namespace ngkde {

//! Parameters Theta = (mu, lambda, alpha, beta) of the bivariate
//! normal-gamma density N(t1 | mu, (lambda t2)^-1) Ga(t2 | alpha, beta).
struct NgTheta {
  double mu = 0.0;
  double lambda = 1.0;  // precision scale, > 0
  double alpha = 1.0;   // gamma shape, > 0
  double beta = 1.0;    // gamma rate, > 0

  void validate() const {
    if (!std::isfinite(mu)) throw std::invalid_argument("NgTheta: mu must be finite");
    if (!(lambda > 0.0)) throw std::invalid_argument("NgTheta: lambda must be > 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("NgTheta: alpha must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("NgTheta: beta must be > 0");
  }
};

//! shape/scale pair of a gamma kernel; scale is the squared bandwidth b^2
//! (first and second gamma class) or b2 (normal-gamma factor).
struct GammaKernelParams {
  double shape = 1.0;  // >= 1 for both gamma kernel classes
  double scale = 1.0;  // > 0
};

//! First gamma kernel class: shape x2/b^2 + 1 (always >= 1).
double gamma1_shape(double x2, double b);

//! Second gamma kernel class: x2/b^2 above the knot 2b^2, the quadratic
//! (x2/b^2)^2/4 + 1 below it. Continuous and nondecreasing in x2.
double gamma2_shape(double x2, double b);

//! Shape map of the second NG estimator: x2/b2 above the knot 3*b2,
//! (x2/b2)^2/9 + 2 below it. Continuous, nondecreasing, >= 2 below the knot.
double ng_alpha_shape(double x2, double b2);

//! Log-density of gamma(shape, scale) at t >= 0, evaluated through
//! log_gamma so shapes up to ~1e6 stay finite. At t = 0 the limit is
//! -inf for shape > 1, log(1/scale) for shape == 1, +inf for shape < 1.
double gamma_pdf_log(double shape, double scale, double t);

//! Normal-gamma density at (t1, t2). Computed in log space and
//! exponentiated last. At t2 = 0 the value is 0 for alpha > 1/2; for
//! alpha <= 1/2 the density diverges there and 0 is returned with
//! *diverged set (the Theta maps below always give alpha >= 2, so the
//! flag never fires through the estimators).
double ng_pdf(const NgTheta& theta, double t1, double t2,
              bool* diverged = nullptr);

//! Theta_1(x) = (x1, 1/((|x1| b1 + b1^2)(x2 + b2)), x2/b2 + 2, 1/b2).
NgTheta make_theta1(const Obs2& x, double b1, double b2);

//! Theta_2(x): as Theta_1 with alpha replaced by ng_alpha_shape(x2, b2).
NgTheta make_theta2(const Obs2& x, double b1, double b2);

}  // namespace ngkde
