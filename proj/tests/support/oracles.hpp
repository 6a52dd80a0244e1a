#pragma once

// Test-only oracles, independent of the library implementation paths they
// check: quadrature built on Gauss-Kronrod 7-15 panels, and naive direct
// re-implementations of the estimators via libm lgamma.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ngkde/types.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// adaptive quadrature

struct GkResult {
  double value;
  double error;
};

inline GkResult gk15(const std::function<double(double)>& f, double a,
                     double b) {
  static const double xk[8] = {
      0.991455371120813, 0.949107912342759, 0.864864423359769,
      0.741531185599394, 0.586087235467691, 0.405845151377397,
      0.207784955007898, 0.0};
  static const double wk[8] = {
      0.022935322010529, 0.063092092629979, 0.104790010322250,
      0.140653259715525, 0.169004726639267, 0.190350578064785,
      0.204432940075298, 0.209482141084728};
  static const double wg[4] = {0.129484966168870, 0.279705391489277,
                               0.381830050505119, 0.417959183673469};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = h * xk[i];
    const double fv = i == 7 ? f(c) : f(c - dx) + f(c + dx);
    resk += wk[i] * fv;
    if (i % 2 == 1) resg += wg[i / 2] * fv;  // Gauss points sit at odd i
  }
  return {resk * h, std::abs((resk - resg) * h)};
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double abs_tol = 1e-8, int max_depth = 28) {
  struct Seg {
    double a, b;
    int depth;
  };
  // pre-split so narrow peaks cannot hide between the nodes of one panel
  std::vector<Seg> stack;
  const int presplit = 16;
  for (int i = 0; i < presplit; ++i) {
    const double lo = a + (b - a) * i / presplit;
    const double hi = a + (b - a) * (i + 1) / presplit;
    stack.push_back({lo, hi, 0});
  }
  double total = 0.0;
  while (!stack.empty()) {
    const Seg seg = stack.back();
    stack.pop_back();
    const GkResult r = gk15(f, seg.a, seg.b);
    const double local_tol = abs_tol * (seg.b - seg.a) / (b - a);
    if (r.error <= local_tol || seg.depth >= max_depth) {
      total += r.value;
    } else {
      const double mid = 0.5 * (seg.a + seg.b);
      stack.push_back({seg.a, mid, seg.depth + 1});
      stack.push_back({mid, seg.b, seg.depth + 1});
    }
  }
  return total;
}

inline double integrate2d(const std::function<double(double, double)>& f,
                          double ax, double bx, double ay, double by,
                          double abs_tol = 1e-8) {
  return integrate(
      [&](double x) {
        return integrate([&](double y) { return f(x, y); }, ay, by,
                         abs_tol * 0.1);
      },
      ax, bx, abs_tol);
}

// ---------------------------------------------------------------------------
// naive estimator reimplementation (direct formulas, libm lgamma)

inline double naive_gauss(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
}

inline double naive_gamma_pdf(double shape, double scale, double t) {
  if (t < 0.0) return 0.0;
  if (t == 0.0) {
    if (shape > 1.0) return 0.0;
    if (shape == 1.0) return 1.0 / scale;
    return INFINITY;
  }
  return std::exp((shape - 1.0) * std::log(t) - t / scale -
                  shape * std::log(scale) - std::lgamma(shape));
}

inline double naive_ng_pdf(double mu, double lambda, double alpha, double beta,
                           double t1, double t2) {
  if (t2 <= 0.0) return 0.0;
  const double normal = std::sqrt(lambda * t2 / (2.0 * M_PI)) *
                        std::exp(-0.5 * (t1 - mu) * (t1 - mu) * lambda * t2);
  const double gamma = std::exp(alpha * std::log(beta) +
                                (alpha - 1.0) * std::log(t2) - beta * t2 -
                                std::lgamma(alpha));
  return normal * gamma;
}

// per-axis shape maps, restated
inline double naive_gamma1_shape(double x2, double b) { return x2 / (b * b) + 1.0; }
inline double naive_gamma2_shape(double x2, double b) {
  const double r = x2 / (b * b);
  return r >= 2.0 ? r : 0.25 * r * r + 1.0;
}
inline double naive_ng_alpha(double x2, double b2) {
  const double r = x2 / b2;
  return r >= 3.0 ? r : r * r / 9.0 + 2.0;
}

//! Direct sum over the sample for any estimator kind.
inline double naive_evaluate(ngkde::EstimatorKind kind,
                             std::span<const ngkde::Obs2> sample,
                             const ngkde::BandwidthVec& bw,
                             const ngkde::Obs2& x) {
  using ngkde::EstimatorKind;
  const double n = static_cast<double>(sample.size());
  double acc = 0.0;
  switch (kind) {
    case EstimatorKind::F1_ClassicalGamma1:
    case EstimatorKind::F2_ClassicalGamma2: {
      const double shape = kind == EstimatorKind::F1_ClassicalGamma1
                               ? naive_gamma1_shape(x.x2, bw.b)
                               : naive_gamma2_shape(x.x2, bw.b);
      for (const auto& obs : sample)
        acc += naive_gauss((x.x1 - obs.x1) / bw.h) *
               naive_gamma_pdf(shape, bw.b * bw.b, obs.x2);
      return acc / (n * bw.h);
    }
    case EstimatorKind::F3_NG_Theta1:
    case EstimatorKind::F4_NG_Theta2: {
      const double lambda =
          1.0 / ((std::abs(x.x1) * bw.b1 + bw.b1 * bw.b1) * (x.x2 + bw.b2));
      const double alpha = kind == EstimatorKind::F3_NG_Theta1
                               ? x.x2 / bw.b2 + 2.0
                               : naive_ng_alpha(x.x2, bw.b2);
      for (const auto& obs : sample)
        acc += naive_ng_pdf(x.x1, lambda, alpha, 1.0 / bw.b2, obs.x1, obs.x2);
      return acc / n;
    }
    case EstimatorKind::F5_ClassicalProduct:
      for (const auto& obs : sample)
        acc += naive_gauss((x.x1 - obs.x1) / bw.h1) *
               naive_gauss((x.x2 - obs.x2) / bw.h2);
      return acc / (n * bw.h1 * bw.h2);
  }
  throw std::logic_error("naive_evaluate: bad kind");
}

inline double naive_loo(ngkde::EstimatorKind kind,
                        std::span<const ngkde::Obs2> sample,
                        const ngkde::BandwidthVec& bw, std::size_t skip) {
  std::vector<ngkde::Obs2> rest;
  for (std::size_t k = 0; k < sample.size(); ++k)
    if (k != skip) rest.push_back(sample[k]);
  return naive_evaluate(kind, rest, bw, sample[skip]);
}

//! From-scratch double-loop LSCV score on a midpoint grid.
inline double naive_lscv(ngkde::EstimatorKind kind,
                         std::span<const ngkde::Obs2> sample,
                         const ngkde::BandwidthVec& bw,
                         const ngkde::Grid2D& grid, bool paper_factor) {
  double integral_sq = 0.0;
  for (std::size_t i = 0; i < grid.nx; ++i)
    for (std::size_t j = 0; j < grid.ny; ++j) {
      const double v = naive_evaluate(
          kind, sample, bw, {grid.node_x1(i), grid.node_x2(j)});
      integral_sq += v * v;
    }
  integral_sq *= grid.cell_area();
  double loo = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i)
    loo += naive_loo(kind, sample, bw, i);
  const double n = static_cast<double>(sample.size());
  return integral_sq - (paper_factor ? 2.0 / (n * n) : 2.0 / n) * loo;
}

// upper 0.1% chi-square critical value, Wilson-Hilferty
inline double chi2_crit_999(double dof) {
  const double z = 3.090232306167814;  // Phi^-1(0.999)
  const double t = 1.0 - 2.0 / (9.0 * dof) + z * std::sqrt(2.0 / (9.0 * dof));
  return dof * t * t * t;
}

}  // namespace oracle
