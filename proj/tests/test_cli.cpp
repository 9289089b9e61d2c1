#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli(const std::string& args) {
  const fs::path dir = fs::temp_directory_path() / "nashseek_cli_io";
  fs::create_directories(dir);
  const std::string cmd = std::string("\"") + NASHSEEK_CLI_PATH + "\" " + args + " > " + (dir / "out").string() +
                          " 2> " + (dir / "err").string();
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = slurp(dir / "out");
  o.err = slurp(dir / "err");
  return o;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nashseek_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("list-builtins and validate") {
  const Outcome list = cli("list-builtins");
  CHECK(list.code == 0);
  for (const char* n : {"scenario_A", "scenario_B", "scenario_C", "scenario_D", "estimator_only",
                        "scenario_A_flipped"}) {
    CHECK(list.out.find(n) != std::string::npos);
  }
  CHECK(cli("validate builtin:scenario_C").code == 0);
  CHECK(cli("validate builtin:nope").code == 1);
  CHECK(cli("validate /does/not/exist.json").code == 1);
}

TEST_CASE("run writes both artifacts") {
  const fs::path dir = scratch("est");
  const Outcome o = cli("run builtin:estimator_only --out " + dir.string());
  CHECK(o.code == 0);
  REQUIRE(fs::exists(dir / "trajectory.csv"));
  const json s = json::parse(slurp(dir / "summary.json"));
  CHECK(s["converged"] == true);
  CHECK(s["metrics"]["final_error"].get<double>() < 1e-3);
}

TEST_CASE("first-order builtin converges") {
  const fs::path dir = scratch("a");
  const Outcome o = cli("run builtin:scenario_A --out " + dir.string());
  CHECK(o.code == 0);
  const json s = json::parse(slurp(dir / "summary.json"));
  CHECK(s["metrics"]["final_error"].get<double>() < 1e-2);
  CHECK(s["diverged"] == false);
}

TEST_CASE("coarse step diverges with exit 2") {
  const fs::path dir = scratch("coarse");
  const Outcome o = cli("run builtin:scenario_A --set integration.h=1.0 --set integration.stride=1 --out " +
                        dir.string());
  CHECK(o.code == 2);
  const json s = json::parse(slurp(dir / "summary.json"));
  CHECK(s["diverged"] == true);
  CHECK(s["converged"] == false);
  CHECK_FALSE(s["divergence"]["slice"].get<std::string>().empty());
}

TEST_CASE("step halving retries") {
  const fs::path dir = scratch("retry");
  // 2e-3 is too coarse for the opening transient; two halvings reach 5e-4.
  const Outcome o = cli("run builtin:scenario_A --set integration.h=2e-3 --set integration.T=5 "
                        "--set integration.stride=10 --retries 2 --tolerance 100 --out " + dir.string());
  CHECK(o.code == 0);
  CHECK(o.err.find("retrying") != std::string::npos);
  const json s = json::parse(slurp(dir / "summary.json"));
  CHECK(s["config"]["integration"]["h"].get<double>() == doctest::Approx(5e-4));
}

TEST_CASE("tolerance decides the exit status of a finished run") {
  const Outcome o = cli("run builtin:estimator_only --tolerance 1e-30 --out " + scratch("tol").string());
  CHECK(o.code == 3);
}

TEST_CASE("malformed graph is a config error naming the edge") {
  json doc = json::parse(R"({"name": "loop", "game": {"builtin": "connectivity"},
    "graph": {"nodes": 7, "edges": [{"from": 1, "to": 2}, {"from": 3, "to": 3, "weight": 1.0}]}})");
  const fs::path dir = scratch("graph");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << doc.dump();
  const Outcome o = cli("run " + (dir / "bad.json").string() + " --out " + (dir / "out").string());
  CHECK(o.code == 1);
  CHECK(o.err.find("(3, 3)") != std::string::npos);
  CHECK(o.err.find("graph.edges") != std::string::npos);

  const Outcome bad_set = cli("validate builtin:scenario_A --set players.1.hidden.b=[0,1]");
  CHECK(bad_set.code == 1);
  CHECK(bad_set.err.find("players.1.hidden.b") != std::string::npos);
}

TEST_CASE("sweep") {
  const fs::path dir = scratch("sweep");
  const Outcome o = cli("sweep builtin:estimator_only estimator.delta 1 5 10 20 --jobs 2 --out " + dir.string());
  CHECK(o.code == 0);
  const std::string table = slurp(dir / "sweep.csv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 5);
  CHECK(table.rfind("estimator.delta,final_error,max_abs_k,diverged", 0) == 0);
  CHECK(cli("sweep builtin:estimator_only estimator.delta --out " + scratch("empty").string()).code == 1);
}
