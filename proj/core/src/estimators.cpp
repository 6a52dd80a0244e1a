#include "ngkde/estimators.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

namespace ngkde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* name) {
  if (!(v > 0.0))
    throw std::invalid_argument(std::string("bandwidth ") + name +
                                " must be > 0 for this estimator");
}

void validate_sample(std::span<const Obs2> sample) {
  if (sample.empty()) throw std::invalid_argument("sample must be nonempty");
  for (const auto& obs : sample) {
    if (!std::isfinite(obs.x1) || !std::isfinite(obs.x2) || obs.x2 < 0.0)
      throw std::invalid_argument("sample entries must be finite with x2 >= 0");
  }
}

// row[k] = gaussian((x - X[k]) / h) for one evaluation abscissa
void gaussian_row(double x, double h, std::span<const Obs2> sample,
                  bool use_x2, double* row) {
  const std::size_t n = sample.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double datum = use_x2 ? sample[k].x2 : sample[k].x1;
    row[k] = gaussian_kernel((x - datum) / h);
  }
}

// row[k] = gamma(shape, scale) pdf at the datum X_{k2}
void gamma_row(double shape, double scale, std::span<const Obs2> sample,
               const double* log_x2, double* row) {
  const std::size_t n = sample.size();
  const double c = -shape * std::log(scale) - log_gamma(shape);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = sample[k].x2;
    if (t == 0.0) {
      row[k] = shape > 1.0 ? 0.0 : (shape == 1.0 ? 1.0 / scale : kInf);
    } else {
      row[k] = std::exp(c + (shape - 1.0) * log_x2[k] - t / scale);
    }
  }
}

void block_separable(EstimatorKind kind, std::span<const Obs2> sample,
                     const BandwidthVec& bw, std::span<const double> xs1,
                     std::span<const double> xs2, double* out) {
  const std::size_t n = sample.size();
  const std::size_t m1 = xs1.size(), m2 = xs2.size();

  double h = 0.0, scale_factor = 0.0;
  if (kind == EstimatorKind::F5_ClassicalProduct) {
    h = bw.h1;
    scale_factor = 1.0 / (static_cast<double>(n) * bw.h1 * bw.h2);
  } else {
    h = bw.h;
    scale_factor = 1.0 / (static_cast<double>(n) * bw.h);
  }

  std::vector<double> a(m1 * n);
  for (std::size_t i = 0; i < m1; ++i)
    gaussian_row(xs1[i], h, sample, false, &a[i * n]);

  std::vector<double> b(m2 * n);
  if (kind == EstimatorKind::F5_ClassicalProduct) {
    for (std::size_t j = 0; j < m2; ++j)
      gaussian_row(xs2[j], bw.h2, sample, true, &b[j * n]);
  } else {
    std::vector<double> log_x2(n);
    for (std::size_t k = 0; k < n; ++k)
      log_x2[k] = sample[k].x2 > 0.0 ? std::log(sample[k].x2) : -kInf;
    const double b2 = bw.b * bw.b;
    for (std::size_t j = 0; j < m2; ++j) {
      const double shape = kind == EstimatorKind::F1_ClassicalGamma1
                               ? gamma1_shape(xs2[j], bw.b)
                               : gamma2_shape(xs2[j], bw.b);
      gamma_row(shape, b2, sample, log_x2.data(), &b[j * n]);
    }
  }

  for (std::size_t i = 0; i < m1; ++i) {
    const double* ai = &a[i * n];
    for (std::size_t j = 0; j < m2; ++j) {
      const double* bj = &b[j * n];
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += ai[k] * bj[k];
      out[i * m2 + j] = acc * scale_factor;
    }
  }
}

void block_ng(EstimatorKind kind, std::span<const Obs2> sample,
              const BandwidthVec& bw, std::span<const double> xs1,
              std::span<const double> xs2, double* out) {
  const std::size_t n = sample.size();
  const std::size_t m1 = xs1.size(), m2 = xs2.size();
  const double b1 = bw.b1, b2 = bw.b2;
  const double beta = 1.0 / b2;
  const double log_beta = std::log(beta);
  const double inv_n = 1.0 / static_cast<double>(n);

  std::vector<double> t2(n), lt2(n), x1d(n);
  for (std::size_t k = 0; k < n; ++k) {
    t2[k] = sample[k].x2;
    lt2[k] = t2[k] > 0.0 ? std::log(t2[k]) : -kInf;
    x1d[k] = sample[k].x1;
  }

  // per-x2-node pieces: alpha, the x2 part of log lambda, and the log
  // normalizer of the gamma factor
  std::vector<double> alpha(m2), lg2(m2), cnode(m2);
  for (std::size_t j = 0; j < m2; ++j) {
    const double x2 = xs2[j];
    alpha[j] = kind == EstimatorKind::F3_NG_Theta1 ? x2 / b2 + 2.0
                                                   : ng_alpha_shape(x2, b2);
    lg2[j] = -std::log(x2 + b2);
    cnode[j] = alpha[j] * log_beta - log_gamma(alpha[j]) -
               0.5 * std::log(2.0 * pi) + 0.5 * lg2[j];
  }

  // p[j*n + k] = (alpha_j - 1/2) log t2_k - beta t2_k
  std::vector<double> p(m2 * n);
  for (std::size_t j = 0; j < m2; ++j) {
    double* pj = &p[j * n];
    const double am = alpha[j] - 0.5;
    for (std::size_t k = 0; k < n; ++k) pj[k] = am * lt2[k] - beta * t2[k];
  }

  std::vector<double> u2t2(n);
  for (std::size_t i = 0; i < m1; ++i) {
    const double x1 = xs1[i];
    const double g1 = 1.0 / (std::abs(x1) * b1 + b1 * b1);
    const double lg1 = std::log(g1);
    for (std::size_t k = 0; k < n; ++k) {
      const double u = x1d[k] - x1;
      u2t2[k] = u * u * t2[k];
    }
    for (std::size_t j = 0; j < m2; ++j) {
      const double lambda = g1 / (xs2[j] + b2);
      const double cc = cnode[j] + 0.5 * lg1;
      const double half_lambda = 0.5 * lambda;
      const double* pj = &p[j * n];
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        acc += std::exp(cc + pj[k] - half_lambda * u2t2[k]);
      }
      out[i * m2 + j] = acc * inv_n;
    }
  }
}

std::size_t check_index(std::size_t i, std::size_t n) {
  if (i >= n) throw std::invalid_argument("index out of range");
  return i;
}

}  // namespace

void validate_bandwidths(EstimatorKind kind, const BandwidthVec& bw) {
  switch (kind) {
    case EstimatorKind::F1_ClassicalGamma1:
    case EstimatorKind::F2_ClassicalGamma2:
      require_positive(bw.h, "h");
      require_positive(bw.b, "b");
      break;
    case EstimatorKind::F3_NG_Theta1:
    case EstimatorKind::F4_NG_Theta2:
      require_positive(bw.b1, "b1");
      require_positive(bw.b2, "b2");
      break;
    case EstimatorKind::F5_ClassicalProduct:
      require_positive(bw.h1, "h1");
      require_positive(bw.h2, "h2");
      break;
  }
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::F1_ClassicalGamma1: return "f1";
    case EstimatorKind::F2_ClassicalGamma2: return "f2";
    case EstimatorKind::F3_NG_Theta1: return "f3";
    case EstimatorKind::F4_NG_Theta2: return "f4";
    case EstimatorKind::F5_ClassicalProduct: return "f5";
  }
  return "?";
}

EstimatorKind parse_estimator_kind(const std::string& tag) {
  if (tag == "f1") return EstimatorKind::F1_ClassicalGamma1;
  if (tag == "f2") return EstimatorKind::F2_ClassicalGamma2;
  if (tag == "f3") return EstimatorKind::F3_NG_Theta1;
  if (tag == "f4") return EstimatorKind::F4_NG_Theta2;
  if (tag == "f5") return EstimatorKind::F5_ClassicalProduct;
  throw std::invalid_argument("unknown estimator kind: " + tag);
}

namespace detail {

void evaluate_block(EstimatorKind kind, std::span<const Obs2> sample,
                    const BandwidthVec& bw, std::span<const double> xs1,
                    std::span<const double> xs2, double* out) {
  switch (kind) {
    case EstimatorKind::F1_ClassicalGamma1:
    case EstimatorKind::F2_ClassicalGamma2:
    case EstimatorKind::F5_ClassicalProduct:
      block_separable(kind, sample, bw, xs1, xs2, out);
      break;
    case EstimatorKind::F3_NG_Theta1:
    case EstimatorKind::F4_NG_Theta2:
      block_ng(kind, sample, bw, xs1, xs2, out);
      break;
  }
}

}  // namespace detail

double evaluate(EstimatorKind kind, std::span<const Obs2> sample,
                const BandwidthVec& bw, const Obs2& x) {
  validate_sample(sample);
  validate_bandwidths(kind, bw);
  if (x.x2 < 0.0)
    throw std::invalid_argument("evaluate: x.x2 must be >= 0");
  double value = 0.0;
  const double xs1[1] = {x.x1};
  const double xs2[1] = {x.x2};
  detail::evaluate_block(kind, sample, bw, xs1, xs2, &value);
  return value;
}

DensitySurface evaluate_grid(EstimatorKind kind, std::span<const Obs2> sample,
                             const BandwidthVec& bw, const Grid2D& grid,
                             unsigned workers) {
  validate_sample(sample);
  validate_bandwidths(kind, bw);
  grid.validate();

  std::vector<double> xs1(grid.nx), xs2(grid.ny);
  for (std::size_t i = 0; i < grid.nx; ++i) xs1[i] = grid.node_x1(i);
  for (std::size_t j = 0; j < grid.ny; ++j) xs2[j] = grid.node_x2(j);

  DensitySurface surface;
  surface.grid = grid;
  surface.values.assign(grid.size(), 0.0);
  surface.meta = {kind, bw};

  if (workers <= 1 || grid.nx < 2) {
    detail::evaluate_block(kind, sample, bw, xs1, xs2, surface.values.data());
    return surface;
  }

  // split x1 rows into contiguous chunks; each chunk runs the same per-row
  // arithmetic, so the result does not depend on the worker count
  const unsigned nthreads =
      std::min<unsigned>(workers, static_cast<unsigned>(grid.nx));
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  const std::size_t rows = grid.nx;
  for (unsigned w = 0; w < nthreads; ++w) {
    const std::size_t lo = rows * w / nthreads;
    const std::size_t hi = rows * (w + 1) / nthreads;
    if (lo == hi) continue;
    pool.emplace_back([&, lo, hi] {
      std::span<const double> rows1(xs1.data() + lo, hi - lo);
      detail::evaluate_block(kind, sample, bw, rows1, xs2,
                             surface.values.data() + lo * grid.ny);
    });
  }
  for (auto& t : pool) t.join();
  return surface;
}

double evaluate_loo(EstimatorKind kind, std::span<const Obs2> sample,
                    const BandwidthVec& bw, std::size_t i) {
  if (sample.size() < 2)
    throw std::invalid_argument("evaluate_loo: need at least two observations");
  check_index(i, sample.size());
  std::vector<Obs2> reduced;
  reduced.reserve(sample.size() - 1);
  for (std::size_t k = 0; k < sample.size(); ++k)
    if (k != i) reduced.push_back(sample[k]);
  return evaluate(kind, reduced, bw, sample[i]);
}

std::string surface_to_csv(const DensitySurface& surface) {
  std::ostringstream os;
  os.precision(17);
  os << "x1,x2,density\n";
  for (std::size_t i = 0; i < surface.grid.nx; ++i) {
    const double x1 = surface.grid.node_x1(i);
    for (std::size_t j = 0; j < surface.grid.ny; ++j) {
      os << x1 << ',' << surface.grid.node_x2(j) << ','
         << surface.at(i, j) << '\n';
    }
  }
  return os.str();
}

namespace {

nlohmann::json bw_to_json(const BandwidthVec& bw) {
  nlohmann::json j = nlohmann::json::object();
  auto put = [&](const char* name, double v) {
    if (std::isfinite(v)) j[name] = v;
  };
  put("h", bw.h);
  put("b", bw.b);
  put("b1", bw.b1);
  put("b2", bw.b2);
  put("h1", bw.h1);
  put("h2", bw.h2);
  return j;
}

}  // namespace

std::string surface_to_json(const DensitySurface& surface) {
  const auto& g = surface.grid;
  nlohmann::json j{
      {"schema_version", 1},
      {"estimator", to_string(surface.meta.kind)},
      {"bandwidths", bw_to_json(surface.meta.bw)},
      {"grid",
       {{"box", {g.x1_lo, g.x1_hi, g.x2_lo, g.x2_hi}},
        {"nx", g.nx},
        {"ny", g.ny},
        {"nodes", "cell midpoints, row-major with x1 major"}}},
      {"values", surface.values},
  };
  return j.dump();
}

}  // namespace ngkde
