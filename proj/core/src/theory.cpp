#include "ngkde/theory.hpp"

#include <json.hpp>

#include <cmath>

namespace ngkde {

namespace {

constexpr double kRegimeCrossover = 20.0;

double axis_step(double lo, double hi) { return 1e-4 * (hi - lo); }

// second-order first/second derivative along one axis of a 1-d slice
// evaluator, switching to one-sided stencils when the central footprint
// leaves [lo, hi]
struct AxisDerivs {
  double d1;
  double d2;
};

AxisDerivs axis_derivs(const std::function<double(double)>& f, double t,
                       double h, double lo, double hi) {
  AxisDerivs out{};
  if (t - 2.0 * h >= lo && t + 2.0 * h <= hi) {
    const double fm = f(t - h), f0 = f(t), fp = f(t + h);
    out.d1 = (fp - fm) / (2.0 * h);
    out.d2 = (fp - 2.0 * f0 + fm) / (h * h);
  } else if (t + 3.0 * h <= hi) {  // forward
    const double f0 = f(t), f1 = f(t + h), f2 = f(t + 2.0 * h),
                 f3 = f(t + 3.0 * h);
    out.d1 = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
    out.d2 = (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h);
  } else {  // backward
    const double f0 = f(t), f1 = f(t - h), f2 = f(t - 2.0 * h),
                 f3 = f(t - 3.0 * h);
    out.d1 = (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * h);
    out.d2 = (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h);
  }
  return out;
}

double first_deriv(const std::function<double(double)>& f, double t, double h,
                   double lo, double hi) {
  if (t - h >= lo && t + h <= hi) return (f(t + h) - f(t - h)) / (2.0 * h);
  if (t + 2.0 * h <= hi)
    return (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h);
  return (3.0 * f(t) - 4.0 * f(t - h) + f(t - 2.0 * h)) / (2.0 * h);
}

double log_gamma_ratio_f3(double kappa2) {
  // Gamma(2 k2 + 7/2) / (sqrt(pi) 2^(2 k2 + 9/2) Gamma^2(k2 + 2))
  return std::exp(log_gamma(2.0 * kappa2 + 3.5) -
                  (2.0 * kappa2 + 4.5) * std::log(2.0) -
                  0.5 * std::log(pi) - 2.0 * log_gamma(kappa2 + 2.0));
}

double log_gamma_ratio_f4(double kappa2) {
  const double q = kappa2 * kappa2 / 9.0;
  return std::exp(log_gamma(2.0 * q + 3.5) - (2.0 * q + 4.5) * std::log(2.0) -
                  0.5 * std::log(pi) - 2.0 * log_gamma(q + 2.0));
}

struct Functionals {
  double bias = 0.0;
  double variance = 0.0;
};

Functionals functionals_on(EstimatorKind kind, const TargetSpec& target,
                           const Grid2D& grid) {
  const double k3 = gaussian_constants().k3;
  Functionals out;
  double raw_v = 0.0;

  std::vector<double> wx(grid.nx), wy(grid.ny);
  for (std::size_t i = 0; i < grid.nx; ++i)
    wx[i] = detail::sqrt_singular_weight(grid.x1_lo + grid.dx() * i,
                                         grid.x1_lo + grid.dx() * (i + 1));
  for (std::size_t j = 0; j < grid.ny; ++j)
    wy[j] = detail::sqrt_singular_weight(grid.x2_lo + grid.dy() * j,
                                         grid.x2_lo + grid.dy() * (j + 1));

  const bool ng = kind == EstimatorKind::F3_NG_Theta1 ||
                  kind == EstimatorKind::F4_NG_Theta2;
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double x1 = grid.node_x1(i);
    for (std::size_t j = 0; j < grid.ny; ++j) {
      const double x2 = grid.node_x2(j);
      const Partials2 d = partials(target, {x1, x2});
      double braced = 0.0;
      switch (kind) {
        case EstimatorKind::F1_ClassicalGamma1:
          braced = 0.5 * d.f11 + d.f2 + 0.5 * x2 * d.f22;
          break;
        case EstimatorKind::F2_ClassicalGamma2:
          braced = d.f11 + x2 * d.f22;
          break;
        case EstimatorKind::F3_NG_Theta1:
          braced = 0.5 * std::abs(x1) * d.f11 + 2.0 * d.f2 + 0.5 * x2 * d.f22;
          break;
        case EstimatorKind::F4_NG_Theta2:
          braced = std::abs(x1) * d.f11 + x2 * d.f22;
          break;
        default:
          throw std::invalid_argument("amise_report covers F1-F4 only");
      }
      out.bias += braced * braced * grid.cell_area();
      raw_v += d.f * (ng ? wx[i] * wy[j] : grid.dx() * wy[j]);
    }
  }
  out.variance = ng ? raw_v / (4.0 * pi * std::sqrt(std::exp(1.0)))
                    : raw_v * k3 * 0.5 / std::sqrt(pi);
  return out;
}

}  // namespace

namespace detail {

double sqrt_singular_weight(double lo, double hi) {
  auto antideriv = [](double t) {
    return t >= 0.0 ? 2.0 * std::sqrt(t) : -2.0 * std::sqrt(-t);
  };
  if (lo >= 0.0 || hi <= 0.0) return std::abs(antideriv(hi) - antideriv(lo));
  return 2.0 * std::sqrt(-lo) + 2.0 * std::sqrt(hi);  // straddles 0
}

}  // namespace detail

Partials2 partials(const TargetSpec& target, const Obs2& x, double step) {
  if (x.x1 < target.x1_lo || x.x1 > target.x1_hi || x.x2 < target.x2_lo ||
      x.x2 > target.x2_hi)
    throw std::invalid_argument("partials: point outside the target box");

  const double h1 = step > 0.0 ? step : axis_step(target.x1_lo, target.x1_hi);
  const double h2 = step > 0.0 ? step : axis_step(target.x2_lo, target.x2_hi);

  auto slice1 = [&](double t) { return target_pdf(target, {t, x.x2}); };
  auto slice2 = [&](double t) { return target_pdf(target, {x.x1, t}); };

  Partials2 out;
  out.f = target_pdf(target, x);
  const AxisDerivs a1 =
      axis_derivs(slice1, x.x1, h1, target.x1_lo, target.x1_hi);
  const AxisDerivs a2 =
      axis_derivs(slice2, x.x2, h2, target.x2_lo, target.x2_hi);
  out.f1 = a1.d1;
  out.f11 = a1.d2;
  out.f2 = a2.d1;
  out.f22 = a2.d2;

  auto df2_at = [&](double x1v) {
    auto slice = [&](double t) { return target_pdf(target, {x1v, t}); };
    return axis_derivs(slice, x.x2, h2, target.x2_lo, target.x2_hi).d1;
  };
  out.f12 = first_deriv(df2_at, x.x1, h1, target.x1_lo, target.x1_hi);
  return out;
}

double bias_leading(EstimatorKind kind, const TargetSpec& target,
                    const Obs2& x, const BandwidthVec& bw) {
  validate_bandwidths(kind, bw);
  const Partials2 d = partials(target, x);
  const double k2 = gaussian_constants().k2;
  switch (kind) {
    case EstimatorKind::F1_ClassicalGamma1: {
      const double b2 = bw.b * bw.b;
      return 0.5 * k2 * bw.h * bw.h * d.f11 +
             b2 * (d.f2 + 0.5 * x.x2 * d.f22);
    }
    case EstimatorKind::F2_ClassicalGamma2: {
      const double b2 = bw.b * bw.b;
      const double classical = 0.5 * k2 * bw.h * bw.h * d.f11;
      if (x.x2 >= 2.0 * b2) return classical + 0.5 * b2 * x.x2 * d.f22;
      return classical +
             b2 * (gamma2_shape(x.x2, bw.b) - x.x2 / b2) * d.f2;
    }
    case EstimatorKind::F3_NG_Theta1:
      return bw.b1 * 0.5 * std::abs(x.x1) * d.f11 +
             bw.b2 * (2.0 * d.f2 + 0.5 * x.x2 * d.f22);
    case EstimatorKind::F4_NG_Theta2: {
      const double x1_term = 0.5 * bw.b1 * std::abs(x.x1) * d.f11;
      if (x.x2 >= 3.0 * bw.b2) return x1_term + 0.5 * bw.b2 * x.x2 * d.f22;
      return x1_term +
             bw.b2 * (ng_alpha_shape(x.x2, bw.b2) - x.x2 / bw.b2) * d.f2;
    }
    default:
      throw std::invalid_argument("bias_leading covers F1-F4 only");
  }
}

double variance_leading(EstimatorKind kind, const TargetSpec& target,
                        const Obs2& x, const BandwidthVec& bw, std::size_t n) {
  validate_bandwidths(kind, bw);
  if (n < 1) throw std::invalid_argument("variance_leading: n must be >= 1");
  const double f = target_pdf(target, x);
  const double k3 = gaussian_constants().k3;
  const double inv_n = 1.0 / static_cast<double>(n);

  switch (kind) {
    case EstimatorKind::F1_ClassicalGamma1:
    case EstimatorKind::F2_ClassicalGamma2: {
      const double b2 = bw.b * bw.b;
      if (x.x2 > kRegimeCrossover * b2) {
        return 0.5 / std::sqrt(pi) * inv_n / (bw.h * bw.b) * k3 * f /
               std::sqrt(x.x2);
      }
      const double kappa = x.x2 / b2;
      double c;
      if (kind == EstimatorKind::F1_ClassicalGamma1) {
        c = std::exp(log_gamma(2.0 * kappa + 1.0) -
                     (1.0 + 2.0 * kappa) * std::log(2.0) -
                     2.0 * log_gamma(kappa + 1.0));
      } else {
        const double q = kappa * kappa;
        c = std::exp(log_gamma(q / 2.0 + 1.0) -
                     (1.0 + q / 2.0) * std::log(2.0) -
                     2.0 * log_gamma(q / 4.0 + 1.0));
      }
      return c * inv_n / (bw.h * b2) * k3 * f;
    }
    case EstimatorKind::F3_NG_Theta1:
    case EstimatorKind::F4_NG_Theta2: {
      const bool x1_interior = std::abs(x.x1) > kRegimeCrossover * bw.b1;
      const bool x2_interior = x.x2 > kRegimeCrossover * bw.b2;
      const double root_e = std::sqrt(std::exp(1.0));
      const double kappa1 = std::abs(x.x1) / bw.b1;
      const double kappa2 = x.x2 / bw.b2;
      if (x1_interior && x2_interior) {
        return inv_n / (4.0 * pi * root_e) / std::sqrt(bw.b1 * bw.b2) * f /
               std::sqrt(std::abs(x.x1) * x.x2);
      }
      if (!x1_interior && !x2_interior) {
        const double c = kind == EstimatorKind::F3_NG_Theta1
                             ? log_gamma_ratio_f3(kappa2)
                             : log_gamma_ratio_f4(kappa2);
        return c / std::sqrt((kappa1 + 1.0) * (kappa2 + 1.0)) * inv_n /
               (bw.b1 * bw.b2) * f;
      }
      if (x1_interior) {  // x2 boundary
        const double c = kind == EstimatorKind::F3_NG_Theta1
                             ? log_gamma_ratio_f3(kappa2)
                             : log_gamma_ratio_f4(kappa2);
        return c / std::sqrt(kappa2 + 1.0) * inv_n /
               (std::sqrt(bw.b1) * bw.b2) / std::sqrt(std::abs(x.x1)) * f;
      }
      // x1 boundary, x2 interior
      return inv_n / (4.0 * pi * root_e * std::sqrt(kappa1 + 1.0)) /
             (bw.b1 * std::sqrt(bw.b2)) / std::sqrt(x.x2) * f;
    }
    default:
      throw std::invalid_argument("variance_leading covers F1-F4 only");
  }
}

double AmiseReport::s0_opt(double n) const {
  const double b = bias_functional, v = variance_functional;
  switch (kind) {
    case EstimatorKind::F1_ClassicalGamma1:
      return std::pow(v / (2.0 * b), 1.0 / 6.0) * std::pow(n, -1.0 / 6.0);
    case EstimatorKind::F2_ClassicalGamma2:
      return std::pow(2.0 * v / b, 1.0 / 6.0) * std::pow(n, -1.0 / 6.0);
    case EstimatorKind::F3_NG_Theta1:
      return std::pow(v / (2.0 * b), 1.0 / 3.0) * std::pow(n, -1.0 / 3.0);
    case EstimatorKind::F4_NG_Theta2:
      return std::pow(2.0 * v / b, 1.0 / 3.0) * std::pow(n, -1.0 / 3.0);
    default:
      throw std::logic_error("AmiseReport: unsupported kind");
  }
}

double AmiseReport::amise_opt(double n) const {
  const double b = bias_functional, v = variance_functional;
  const bool half_weighted = kind == EstimatorKind::F2_ClassicalGamma2 ||
                             kind == EstimatorKind::F4_NG_Theta2;
  const double c = half_weighted ? 3.0 / std::pow(2.0, 4.0 / 3.0)
                                 : 3.0 / std::pow(2.0, 2.0 / 3.0);
  return c * std::cbrt(b) * std::pow(v, 2.0 / 3.0) * std::pow(n, -2.0 / 3.0);
}

AmiseReport amise_report(EstimatorKind kind, const TargetSpec& target,
                         const Grid2D& grid, std::size_t n_ref) {
  grid.validate();
  const Functionals coarse = functionals_on(kind, target, grid);
  Grid2D fine = grid;
  fine.nx *= 2;
  fine.ny *= 2;
  const Functionals refined = functionals_on(kind, target, fine);

  auto rel = [](double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
  };
  if (rel(coarse.bias, refined.bias) > 0.02 ||
      rel(coarse.variance, refined.variance) > 0.02) {
    throw std::runtime_error(
        "amise_report: quadrature not converged (bias " +
        std::to_string(coarse.bias) + " -> " + std::to_string(refined.bias) +
        ", variance " + std::to_string(coarse.variance) + " -> " +
        std::to_string(refined.variance) + ")");
  }
  if (!(refined.variance > 0.0) || !std::isfinite(refined.variance))
    throw std::runtime_error("amise_report: variance functional not finite");

  AmiseReport report;
  report.kind = kind;
  report.bias_functional = refined.bias;
  report.variance_functional = refined.variance;
  report.n_ref = n_ref;
  return report;
}

std::string amise_to_json(const AmiseReport& report) {
  const double n = static_cast<double>(report.n_ref);
  nlohmann::json j{
      {"schema_version", 1},
      {"estimator", to_string(report.kind)},
      {"bias_functional", report.bias_functional},
      {"variance_functional", report.variance_functional},
      {"n_ref", report.n_ref},
      {"s0_opt_at_n_ref", report.s0_opt(n)},
      {"amise_opt_at_n_ref", report.amise_opt(n)},
  };
  return j.dump();
}

}  // namespace ngkde
