#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "ngkde/csv.hpp"
#include "ngkde/simulation.hpp"
#include "ngkde/theory.hpp"

namespace ngkde_cli {

namespace {

using namespace ngkde;

std::vector<EstimatorKind> parse_kinds(const std::string& csv) {
  std::vector<EstimatorKind> kinds;
  std::istringstream is(csv);
  std::string token;
  while (std::getline(is, token, ','))
    if (!token.empty()) kinds.push_back(parse_estimator_kind(token));
  if (kinds.empty()) throw std::invalid_argument("no estimator kinds given");
  return kinds;
}

std::vector<double> parse_doubles(const std::string& csv, std::size_t want,
                                  const char* what) {
  std::vector<double> out;
  std::istringstream is(csv);
  std::string token;
  while (std::getline(is, token, ',')) out.push_back(std::stod(token));
  if (out.size() != want)
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(want) + " comma-separated values");
  return out;
}

ScalarSearchSpec parse_search(const std::string& text) {
  const auto v = parse_doubles(text, 4, "--search");
  ScalarSearchSpec s;
  s.lo = v[0];
  s.hi = v[1];
  s.coarse_points = static_cast<std::size_t>(v[2]);
  s.refine_iters = static_cast<std::size_t>(v[3]);
  s.validate();
  return s;
}

unsigned default_workers() {
  if (const char* env = std::getenv("NGKDE_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NGKDE_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 1;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << content;
}

TargetSpec load_target(const std::string& id_or_path) {
  if (id_or_path == "f1" || id_or_path == "f2" || id_or_path == "f3" ||
      id_or_path == "f4")
    return builtin_target(id_or_path);
  std::ifstream in(id_or_path);
  if (!in)
    throw std::invalid_argument("target '" + id_or_path +
                                "' is neither a builtin id nor a readable file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return target_from_json(buf.str());
}

int cmd_simulate(const std::string& target, std::size_t n, std::size_t reps,
                 const std::string& kinds, const std::string& grid,
                 const std::string& search, const std::string& bw_mode,
                 std::uint64_t seed, unsigned workers,
                 const std::string& out_path, bool quiet) {
  SimConfig config;
  if (target.size() == 2 && target[0] == 'f') {
    config.target_id = target;
  } else {
    config.custom_target = load_target(target);
    config.target_id = config.custom_target->name;
  }
  config.n = n;
  config.replications = reps;
  config.kinds = parse_kinds(kinds);
  const auto g = parse_doubles(grid, 2, "--grid");
  config.grid_nx = static_cast<std::size_t>(g[0]);
  config.grid_ny = static_cast<std::size_t>(g[1]);
  config.search = parse_search(search);
  if (bw_mode == "tied")
    config.bw_mode = BandwidthMode::Tied;
  else if (bw_mode == "per-axis")
    config.bw_mode = BandwidthMode::PerAxis;
  else
    throw std::invalid_argument("--bw-mode must be tied or per-axis");
  config.master_seed = seed;
  config.workers = workers;

  const SimReport report = run_simulation(config);
  const std::string json = report_to_json(report);
  if (!out_path.empty())
    write_file(out_path, json);
  else
    std::cout << json << '\n';
  if (!quiet) std::cout << report_to_table(report);
  return 0;
}

int cmd_estimate(const std::string& input, const std::string& x1_col,
                 const std::string& x2_col, bool log10_x1, bool log10_x2,
                 const std::string& kind_tag, const std::string& bw_text,
                 const std::string& select, const std::string& factor_text,
                 const std::string& grid, const std::string& box,
                 const std::string& search_text, unsigned workers,
                 const std::string& out_prefix) {
  const EstimatorKind kind = parse_estimator_kind(kind_tag);
  const IngestResult data =
      ingest_csv(input, ColumnRef::parse(x1_col), ColumnRef::parse(x2_col),
                 log10_x1, log10_x2);
  std::cerr << "ingested " << data.sample.size() << " rows, rejected "
            << data.rejected.size() << '\n';
  for (const auto& r : data.rejected)
    std::cerr << "  line " << r.line << ": " << r.reason << '\n';

  const ScalarSearchSpec search = parse_search(search_text);
  const LscvFactor factor =
      factor_text == "paper" ? LscvFactor::Paper : LscvFactor::Standard;

  const auto gv = parse_doubles(grid, 2, "--grid");
  const std::size_t nx = static_cast<std::size_t>(gv[0]);
  const std::size_t ny = static_cast<std::size_t>(gv[1]);
  Grid2D domain;
  if (!box.empty()) {
    const auto bv = parse_doubles(box, 4, "--box");
    domain = Grid2D{bv[0], bv[1], bv[2], bv[3], nx, ny};
    domain.validate();
  } else {
    domain =
        lscv_default_grid(data.sample, std::sqrt(search.lo * search.hi), nx, ny);
  }

  BandwidthVec bw;
  std::string selection_json;
  if (select == "lscv" || select == "lscv2d") {
    const SelectionResult sel =
        select == "lscv"
            ? lscv_select(kind, data.sample, domain, search, factor)
            : lscv_select_2d(kind, data.sample, domain, search, factor);
    bw = sel.bw;
    selection_json = selection_to_json(sel);
    std::cerr << "selected s1=" << sel.s1 << " s2=" << sel.s2
              << " score=" << sel.score << '\n';
  } else if (!select.empty()) {
    throw std::invalid_argument("--select must be lscv or lscv2d");
  } else if (!bw_text.empty()) {
    std::istringstream is(bw_text);
    std::vector<double> v;
    std::string token;
    while (std::getline(is, token, ',')) v.push_back(std::stod(token));
    if (v.size() == 1)
      bw = tie_bandwidths(v[0]);
    else if (v.size() == 2)
      bw = expand_bandwidths(kind, v[0], v[1]);
    else
      throw std::invalid_argument("--bw takes one tied scale or s1,s2");
  } else {
    throw std::invalid_argument("estimate needs --bw or --select");
  }

  const DensitySurface surface =
      evaluate_grid(kind, data.sample, bw, domain, workers);
  write_file(out_prefix + ".csv", surface_to_csv(surface));
  std::string json = surface_to_json(surface);
  if (!selection_json.empty()) {
    // splice the selection block into the surface document
    nlohmann::json j = nlohmann::json::parse(json);
    j["selection"] = nlohmann::json::parse(selection_json);
    json = j.dump();
  }
  write_file(out_prefix + ".json", json);
  std::cout << "wrote " << out_prefix << ".csv and " << out_prefix << ".json\n";
  return 0;
}

int cmd_theory(const std::string& target_text, const std::string& kinds_text,
               const std::string& grid, std::size_t n_ref,
               const std::string& out_path) {
  const TargetSpec target = load_target(target_text);
  const auto kinds = parse_kinds(kinds_text);
  const auto gv = parse_doubles(grid, 2, "--grid");
  const Grid2D g = target.grid(static_cast<std::size_t>(gv[0]),
                               static_cast<std::size_t>(gv[1]));

  nlohmann::json arr = nlohmann::json::array();
  std::ostringstream table;
  table << std::left << std::setw(10) << "estimator" << std::right
        << std::setw(16) << "bias_fn" << std::setw(16) << "var_fn"
        << std::setw(14) << "s0_opt(n)" << std::setw(16) << "amise_opt(n)"
        << "   (n=" << n_ref << ")\n";
  for (EstimatorKind kind : kinds) {
    const AmiseReport r = amise_report(kind, target, g, n_ref);
    arr.push_back(nlohmann::json::parse(amise_to_json(r)));
    const double nn = static_cast<double>(n_ref);
    table << std::left << std::setw(10) << to_string(kind) << std::right
          << std::scientific << std::setprecision(5) << std::setw(16)
          << r.bias_functional << std::setw(16) << r.variance_functional
          << std::setw(14) << std::setprecision(3) << r.s0_opt(nn)
          << std::setw(16) << std::setprecision(5) << r.amise_opt(nn) << '\n';
  }
  const std::string json =
      nlohmann::json{{"schema_version", 1},
                     {"target", target.name},
                     {"n_ref", n_ref},
                     {"reports", arr}}
          .dump(2);
  if (!out_path.empty())
    write_file(out_path, json);
  else
    std::cout << json << '\n';
  std::cout << table.str();
  return 0;
}

int cmd_targets(const std::string& id, const std::string& out_path) {
  if (id.empty()) {
    std::cout << "builtin targets: f1 f2 f3 f4\n";
    return 0;
  }
  const std::string json = target_to_json(builtin_target(id));
  if (!out_path.empty())
    write_file(out_path, json);
  else
    std::cout << json << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"bivariate density estimation on R x [0, inf) with gamma and "
               "normal-gamma associated kernels"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "seeded replication study");
  std::string sim_target = "f1", sim_kinds = "f1,f2,f3,f4,f5";
  std::string sim_grid = "101,101", sim_search = "0.02,3.0,60,40";
  std::string sim_mode = "per-axis", sim_out;
  std::size_t sim_n = 100, sim_reps = 1000;
  std::uint64_t sim_seed = default_seed();
  unsigned sim_workers = default_workers();
  bool sim_quiet = false;
  sim->add_option("--target", sim_target, "builtin id (f1..f4) or spec json path");
  sim->add_option("--n", sim_n, "sample size per replication");
  sim->add_option("--reps", sim_reps, "number of replications");
  sim->add_option("--kinds", sim_kinds, "comma list of estimators");
  sim->add_option("--grid", sim_grid, "nx,ny quadrature nodes");
  sim->add_option("--search", sim_search, "lo,hi,points,iters");
  sim->add_option("--bw-mode", sim_mode, "tied or per-axis");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--workers", sim_workers, "worker threads");
  sim->add_option("--out", sim_out, "report json path (default stdout)");
  sim->add_flag("--quiet", sim_quiet, "suppress the text table");

  // estimate
  auto* est = app.add_subcommand("estimate", "fit a surface to csv data");
  std::string est_input, est_x1 = "0", est_x2 = "1", est_kind = "f4";
  std::string est_bw, est_select, est_factor = "standard";
  std::string est_grid = "151,151", est_box, est_search = "0.02,3.0,60,40";
  std::string est_out = "surface";
  bool est_log1 = false, est_log2 = false;
  unsigned est_workers = default_workers();
  est->add_option("--input", est_input, "csv file")->required();
  est->add_option("--x1-col", est_x1, "column name or index for x1");
  est->add_option("--x2-col", est_x2, "column name or index for x2");
  est->add_flag("--log10-x1", est_log1, "apply log10 to x1");
  est->add_flag("--log10-x2", est_log2, "apply log10 to x2");
  est->add_option("--kind", est_kind, "estimator f1..f5");
  est->add_option("--bw", est_bw, "tied scale s, or s1,s2");
  est->add_option("--select", est_select, "lscv or lscv2d");
  est->add_option("--lscv-factor", est_factor, "paper or standard");
  est->add_option("--grid", est_grid, "nx,ny surface nodes");
  est->add_option("--box", est_box, "x1_lo,x1_hi,x2_lo,x2_hi (default padded hull)");
  est->add_option("--search", est_search, "lo,hi,points,iters");
  est->add_option("--workers", est_workers, "worker threads");
  est->add_option("--out", est_out, "output path prefix");

  // theory
  auto* theo = app.add_subcommand("theory", "asymptotic bias/variance summary");
  std::string theo_target = "f1", theo_kinds = "f1,f2,f3,f4";
  std::string theo_grid = "150,150", theo_out;
  std::size_t theo_n = 100;
  theo->add_option("--target", theo_target, "builtin id or spec json path");
  theo->add_option("--kinds", theo_kinds, "comma list of f1..f4");
  theo->add_option("--grid", theo_grid, "nx,ny quadrature nodes");
  theo->add_option("--n", theo_n, "reference sample size");
  theo->add_option("--out", theo_out, "report json path (default stdout)");

  // targets
  auto* tgt = app.add_subcommand("targets", "list or export builtin targets");
  std::string tgt_id, tgt_out;
  tgt->add_option("--id", tgt_id, "builtin id to export");
  tgt->add_option("--out", tgt_out, "json path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(sim_target, sim_n, sim_reps, sim_kinds, sim_grid,
                          sim_search, sim_mode, sim_seed, sim_workers, sim_out,
                          sim_quiet);
    if (est->parsed())
      return cmd_estimate(est_input, est_x1, est_x2, est_log1, est_log2,
                          est_kind, est_bw, est_select, est_factor, est_grid,
                          est_box, est_search, est_workers, est_out);
    if (theo->parsed())
      return cmd_theory(theo_target, theo_kinds, theo_grid, theo_n, theo_out);
    if (tgt->parsed()) return cmd_targets(tgt_id, tgt_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace ngkde_cli
