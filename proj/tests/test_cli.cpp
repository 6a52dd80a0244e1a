#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "cli.hpp"

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"ngkde"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return ngkde_cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("simulate twice with the same seed is byte-identical") {
  for (const char* workers : {"1", "2"}) {
    const int rc = run_cli({"simulate", "--target", "f1", "--n", "25", "--reps",
                            "3", "--seed", "7", "--kinds", "f4,f5", "--grid",
                            "31,31", "--search", "0.05,2.0,10,6", "--workers",
                            workers, "--quiet", "--out",
                            std::string("/tmp/ngkde_cli_rep_") + workers +
                                ".json"});
    CHECK(rc == 0);
  }
  const std::string a = slurp("/tmp/ngkde_cli_rep_1.json");
  const std::string b = slurp("/tmp/ngkde_cli_rep_2.json");
  REQUIRE(!a.empty());
  CHECK(a == b);
  std::remove("/tmp/ngkde_cli_rep_1.json");
  std::remove("/tmp/ngkde_cli_rep_2.json");
}

TEST_CASE("estimate with lscv selection produces a valid surface") {
  // synthetic stand-in sample written to csv, then fit end to end
  {
    std::ofstream csv("/tmp/ngkde_cli_data.csv");
    csv << "u,v\n";
    // deterministic blob with a nonnegative second column
    for (int i = 0; i < 120; ++i) {
      const double x1 = std::sin(0.37 * i) * 2.0 + 0.01 * i;
      const double x2 = 1.0 + std::cos(0.23 * i) * 0.8 + 0.003 * i;
      csv << x1 << ',' << x2 << '\n';
    }
  }
  const int rc = run_cli({"estimate", "--input", "/tmp/ngkde_cli_data.csv",
                          "--x1-col", "u", "--x2-col", "v", "--kind", "f4",
                          "--select", "lscv", "--search", "0.05,2.0,10,6",
                          "--grid", "41,41", "--out", "/tmp/ngkde_cli_surf"});
  CHECK(rc == 0);
  const std::string csv_text = slurp("/tmp/ngkde_cli_surf.csv");
  CHECK(csv_text.rfind("x1,x2,density\n", 0) == 0);
  const std::string json_text = slurp("/tmp/ngkde_cli_surf.json");
  CHECK(json_text.find("\"selection\"") != std::string::npos);
  CHECK(json_text.find("\"b1\"") != std::string::npos);
  std::remove("/tmp/ngkde_cli_data.csv");
  std::remove("/tmp/ngkde_cli_surf.csv");
  std::remove("/tmp/ngkde_cli_surf.json");
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"estimate", "--input", "/tmp/no_such_file.csv", "--kind",
                 "f4", "--bw", "1"}) == 2);
  CHECK(run_cli({"simulate", "--target", "f9", "--n", "10", "--reps", "1",
                 "--quiet"}) == 2);
  CHECK(run_cli({"frobnicate"}) == 2);
  CHECK(run_cli({"targets"}) == 0);
  CHECK(run_cli({"targets", "--id", "f2", "--out", "/tmp/ngkde_cli_f2.json"}) ==
        0);
  CHECK(slurp("/tmp/ngkde_cli_f2.json").find("\"gamma\"") !=
        std::string::npos);
  std::remove("/tmp/ngkde_cli_f2.json");
}

TEST_SUITE_END();
