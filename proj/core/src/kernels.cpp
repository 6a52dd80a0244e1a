#include "ngkde/kernels.hpp"

#include <limits>

namespace ngkde {

namespace {

void check_x2_b(double x2, double b, const char* who) {
  if (x2 < 0.0) throw std::invalid_argument(std::string(who) + ": x2 must be >= 0");
  if (!(b > 0.0)) throw std::invalid_argument(std::string(who) + ": bandwidth must be > 0");
}

}  // namespace

double gamma1_shape(double x2, double b) {
  check_x2_b(x2, b, "gamma1_shape");
  return x2 / (b * b) + 1.0;
}

double gamma2_shape(double x2, double b) {
  check_x2_b(x2, b, "gamma2_shape");
  const double r = x2 / (b * b);
  if (r >= 2.0) return r;
  return 0.25 * r * r + 1.0;
}

double ng_alpha_shape(double x2, double b2) {
  check_x2_b(x2, b2, "ng_alpha_shape");
  const double r = x2 / b2;
  if (r >= 3.0) return r;
  return r * r / 9.0 + 2.0;
}

double gamma_pdf_log(double shape, double scale, double t) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("gamma_pdf_log: shape and scale must be > 0");
  if (t < 0.0) throw std::invalid_argument("gamma_pdf_log: t must be >= 0");
  if (t == 0.0) {
    if (shape > 1.0) return -std::numeric_limits<double>::infinity();
    if (shape == 1.0) return -std::log(scale);
    return std::numeric_limits<double>::infinity();
  }
  return (shape - 1.0) * std::log(t) - t / scale - shape * std::log(scale) -
         log_gamma(shape);
}

double ng_pdf(const NgTheta& theta, double t1, double t2, bool* diverged) {
  theta.validate();
  if (t2 < 0.0) throw std::invalid_argument("ng_pdf: t2 must be >= 0");
  if (diverged) *diverged = false;
  if (t2 == 0.0) {
    // t2^(alpha - 1/2) controls the limit; alpha <= 1/2 diverges.
    if (theta.alpha <= 0.5 && diverged) *diverged = true;
    return 0.0;
  }
  const double u = t1 - theta.mu;
  const double log_normal = 0.5 * (std::log(theta.lambda) + std::log(t2)) -
                            0.5 * std::log(2.0 * pi) -
                            0.5 * u * u * theta.lambda * t2;
  const double log_gamma_part = theta.alpha * std::log(theta.beta) +
                                (theta.alpha - 1.0) * std::log(t2) -
                                theta.beta * t2 - log_gamma(theta.alpha);
  return std::exp(log_normal + log_gamma_part);
}

NgTheta make_theta1(const Obs2& x, double b1, double b2) {
  if (x.x2 < 0.0) throw std::invalid_argument("make_theta1: x2 must be >= 0");
  if (!(b1 > 0.0) || !(b2 > 0.0))
    throw std::invalid_argument("make_theta1: bandwidths must be > 0");
  NgTheta th;
  th.mu = x.x1;
  th.lambda = 1.0 / ((std::abs(x.x1) * b1 + b1 * b1) * (x.x2 + b2));
  th.alpha = x.x2 / b2 + 2.0;
  th.beta = 1.0 / b2;
  return th;
}

NgTheta make_theta2(const Obs2& x, double b1, double b2) {
  NgTheta th = make_theta1(x, b1, b2);
  th.alpha = ng_alpha_shape(x.x2, b2);
  return th;
}

}  // namespace ngkde
