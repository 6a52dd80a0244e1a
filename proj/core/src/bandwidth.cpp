#include "ngkde/bandwidth.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace ngkde {

namespace {

constexpr double kGoldenRatio = 0.61803398874989484820;

std::vector<double> log_spaced(double lo, double hi, std::size_t m) {
  std::vector<double> out(m);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = m == 1 ? 0.0
                            : static_cast<double>(i) / static_cast<double>(m - 1);
    out[i] = std::exp(llo + (lhi - llo) * t);
  }
  return out;
}

struct BestPoint {
  double s1 = 0.0, s2 = 0.0;
  double score = std::numeric_limits<double>::infinity();

  // smaller score wins; equal scores prefer the smaller (s1, s2)
  void offer(double a, double b, double v) {
    if (v < score || (v == score && (a < s1 || (a == s1 && b < s2)))) {
      s1 = a;
      s2 = b;
      score = v;
    }
  }
};

// golden-section refinement of f over [lo, hi]; every evaluation is offered
// to `best` and appended to the trace through f itself
void golden_refine(const std::function<double(double)>& f, double lo,
                   double hi, std::size_t iters) {
  double a = lo, b = hi;
  double c = b - kGoldenRatio * (b - a);
  double d = a + kGoldenRatio * (b - a);
  double fc = f(c), fd = f(d);
  for (std::size_t it = 0; it < iters; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGoldenRatio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGoldenRatio * (b - a);
      fd = f(d);
    }
  }
}

// shared scan/refine driver; objective(s1, s2) records its own trace
SelectionResult run_search(
    EstimatorKind kind, const ScalarSearchSpec& search, bool per_axis,
    std::size_t sweeps, const std::function<double(double, double)>& objective,
    std::vector<TracePoint>* trace) {
  search.validate();
  BestPoint best;
  auto probe = [&](double a, double b) {
    const double v = objective(a, b);
    trace->push_back({a, b, v});
    best.offer(a, b, v);
    return v;
  };

  const auto coarse = log_spaced(search.lo, search.hi, search.coarse_points);
  std::size_t k_best = 0;
  double v_best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const double v = probe(coarse[k], coarse[k]);
    if (v < v_best) {
      v_best = v;
      k_best = k;
    }
  }

  if (!per_axis) {
    const double lo = coarse[k_best == 0 ? 0 : k_best - 1];
    const double hi = coarse[std::min(k_best + 1, coarse.size() - 1)];
    golden_refine([&](double s) { return probe(s, s); }, lo, hi,
                  search.refine_iters);
  } else {
    double s1 = coarse[k_best], s2 = coarse[k_best];
    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
      golden_refine([&](double s) { return probe(s, s2); }, search.lo,
                    search.hi, search.refine_iters);
      s1 = best.s1;
      golden_refine([&](double s) { return probe(s1, s); }, search.lo,
                    search.hi, search.refine_iters);
      s2 = best.s2;
      s1 = best.s1;
    }
  }

  SelectionResult result;
  result.s1 = best.s1;
  result.s2 = best.s2;
  result.tied = !per_axis;
  result.bw = per_axis ? expand_bandwidths(kind, best.s1, best.s2)
                       : tie_bandwidths(best.s1);
  result.score = best.score;
  return result;
}

}  // namespace

BandwidthVec tie_bandwidths(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("tie_bandwidths: s must be > 0");
  BandwidthVec bw;
  bw.h = bw.b = bw.h1 = bw.h2 = s;
  bw.b1 = bw.b2 = s * s;
  return bw;
}

BandwidthVec expand_bandwidths(EstimatorKind kind, double s1, double s2) {
  if (!(s1 > 0.0) || !(s2 > 0.0))
    throw std::invalid_argument("expand_bandwidths: scales must be > 0");
  BandwidthVec bw;
  switch (kind) {
    case EstimatorKind::F1_ClassicalGamma1:
    case EstimatorKind::F2_ClassicalGamma2:
      bw.h = s1;
      bw.b = s2;
      break;
    case EstimatorKind::F3_NG_Theta1:
    case EstimatorKind::F4_NG_Theta2:
      bw.b1 = s1 * s1;
      bw.b2 = s2 * s2;
      break;
    case EstimatorKind::F5_ClassicalProduct:
      bw.h1 = s1;
      bw.h2 = s2;
      break;
  }
  return bw;
}

double ise(const DensitySurface& surface, const TargetSpec& target) {
  const Grid2D& grid = surface.grid;
  grid.validate();
  const double eps = 1e-9;
  if (grid.x1_lo < target.x1_lo - eps || grid.x1_hi > target.x1_hi + eps ||
      grid.x2_lo < target.x2_lo - eps || grid.x2_hi > target.x2_hi + eps)
    throw std::invalid_argument("ise: grid lies outside the target box");

  double acc = 0.0;
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double x1 = grid.node_x1(i);
    for (std::size_t j = 0; j < grid.ny; ++j) {
      const double diff =
          surface.at(i, j) - target_pdf(target, {x1, grid.node_x2(j)});
      acc += diff * diff;
    }
  }
  return acc * grid.cell_area();
}

double ise(EstimatorKind kind, std::span<const Obs2> sample,
           const BandwidthVec& bw, const TargetSpec& target,
           const Grid2D& grid) {
  grid.validate();
  return ise(evaluate_grid(kind, sample, bw, grid), target);
}

namespace {

// target surface cached once per selection; recomputing it for every
// bandwidth probe would dominate the classical estimators' cost
std::vector<double> target_surface(const TargetSpec& target,
                                   const Grid2D& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double x1 = grid.node_x1(i);
    for (std::size_t j = 0; j < grid.ny; ++j)
      out[i * grid.ny + j] = target_pdf(target, {x1, grid.node_x2(j)});
  }
  return out;
}

double ise_against(EstimatorKind kind, std::span<const Obs2> sample,
                   const BandwidthVec& bw, const Grid2D& grid,
                   const std::vector<double>& target_values) {
  const DensitySurface surface = evaluate_grid(kind, sample, bw, grid);
  double acc = 0.0;
  for (std::size_t idx = 0; idx < surface.values.size(); ++idx) {
    const double diff = surface.values[idx] - target_values[idx];
    acc += diff * diff;
  }
  return acc * grid.cell_area();
}

void check_oracle_grid(const TargetSpec& target, const Grid2D& grid) {
  const double eps = 1e-9;
  if (grid.x1_lo < target.x1_lo - eps || grid.x1_hi > target.x1_hi + eps ||
      grid.x2_lo < target.x2_lo - eps || grid.x2_hi > target.x2_hi + eps)
    throw std::invalid_argument("oracle selection: grid outside target box");
}

}  // namespace

SelectionResult oracle_select(EstimatorKind kind, std::span<const Obs2> sample,
                              const TargetSpec& target, const Grid2D& grid,
                              const ScalarSearchSpec& search) {
  check_oracle_grid(target, grid);
  const auto tv = target_surface(target, grid);
  std::vector<TracePoint> trace;
  auto objective = [&](double s, double) {
    return ise_against(kind, sample, tie_bandwidths(s), grid, tv);
  };
  SelectionResult result =
      run_search(kind, search, /*per_axis=*/false, 0, objective, &trace);
  result.trace = std::move(trace);
  return result;
}

SelectionResult oracle_select_2d(EstimatorKind kind,
                                 std::span<const Obs2> sample,
                                 const TargetSpec& target, const Grid2D& grid,
                                 const ScalarSearchSpec& search,
                                 std::size_t sweeps) {
  check_oracle_grid(target, grid);
  const auto tv = target_surface(target, grid);
  std::vector<TracePoint> trace;
  auto objective = [&](double s1, double s2) {
    return ise_against(kind, sample, expand_bandwidths(kind, s1, s2), grid, tv);
  };
  SelectionResult result =
      run_search(kind, search, /*per_axis=*/true, sweeps, objective, &trace);
  result.trace = std::move(trace);
  return result;
}

double lscv_score(EstimatorKind kind, std::span<const Obs2> sample,
                  const BandwidthVec& bw, const Grid2D& grid,
                  LscvFactor factor) {
  const std::size_t n = sample.size();
  if (n < 2) throw std::invalid_argument("lscv_score: need n >= 2");

  const DensitySurface surface = evaluate_grid(kind, sample, bw, grid);
  double integral_sq = 0.0;
  for (double v : surface.values) integral_sq += v * v;
  integral_sq *= grid.cell_area();

  double loo_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    loo_sum += evaluate_loo(kind, sample, bw, i);

  const double nn = static_cast<double>(n);
  const double fac = factor == LscvFactor::Paper ? 2.0 / (nn * nn) : 2.0 / nn;
  return integral_sq - fac * loo_sum;
}

SelectionResult lscv_select(EstimatorKind kind, std::span<const Obs2> sample,
                            const Grid2D& grid, const ScalarSearchSpec& search,
                            LscvFactor factor) {
  std::vector<TracePoint> trace;
  auto objective = [&](double s, double) {
    return lscv_score(kind, sample, tie_bandwidths(s), grid, factor);
  };
  SelectionResult result =
      run_search(kind, search, /*per_axis=*/false, 0, objective, &trace);
  result.trace = std::move(trace);
  return result;
}

SelectionResult lscv_select_2d(EstimatorKind kind,
                               std::span<const Obs2> sample, const Grid2D& grid,
                               const ScalarSearchSpec& search,
                               LscvFactor factor, std::size_t sweeps) {
  std::vector<TracePoint> trace;
  auto objective = [&](double s1, double s2) {
    return lscv_score(kind, sample, expand_bandwidths(kind, s1, s2), grid,
                      factor);
  };
  SelectionResult result =
      run_search(kind, search, /*per_axis=*/true, sweeps, objective, &trace);
  result.trace = std::move(trace);
  return result;
}

Grid2D lscv_default_grid(std::span<const Obs2> sample, double pad_scale,
                         std::size_t nx, std::size_t ny) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  double x1_lo = sample[0].x1, x1_hi = sample[0].x1;
  double x2_lo = sample[0].x2, x2_hi = sample[0].x2;
  for (const auto& obs : sample) {
    x1_lo = std::min(x1_lo, obs.x1);
    x1_hi = std::max(x1_hi, obs.x1);
    x2_lo = std::min(x2_lo, obs.x2);
    x2_hi = std::max(x2_hi, obs.x2);
  }
  const double pad = 4.0 * pad_scale;
  Grid2D grid{x1_lo - pad, x1_hi + pad, std::max(0.0, x2_lo - pad),
              x2_hi + pad, nx, ny};
  grid.validate();
  return grid;
}

std::string selection_to_json(const SelectionResult& result) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : result.trace) {
    if (result.tied)
      trace.push_back({{"s", t.s1}, {"score", t.score}});
    else
      trace.push_back({{"s1", t.s1}, {"s2", t.s2}, {"score", t.score}});
  }
  nlohmann::json j{
      {"schema_version", 1},
      {"mode", result.tied ? "tied" : "per_axis"},
      {"score", result.score},
      {"trace", trace},
  };
  if (result.tied) {
    j["s_opt"] = result.s1;
  } else {
    j["s1"] = result.s1;
    j["s2"] = result.s2;
  }
  nlohmann::json bwj = nlohmann::json::object();
  auto put = [&](const char* name, double v) {
    if (std::isfinite(v)) bwj[name] = v;
  };
  put("h", result.bw.h);
  put("b", result.bw.b);
  put("b1", result.bw.b1);
  put("b2", result.bw.b2);
  put("h1", result.bw.h1);
  put("h2", result.bw.h2);
  j["bandwidths"] = bwj;
  return j.dump();
}

}  // namespace ngkde
