#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "fragtree/commands.hpp"

using namespace fragtree;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("fragtree_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::map<std::string, std::string> contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return out;
}

ExperimentConfig small(const std::string& dir) {
  ExperimentConfig c;
  c.out = scratch(dir).string();
  c.replicates = 150;
  c.checkpoints = {1, 4, 8};
  c.leaves = 4;
  return c;
}

int run(const std::string& cmd, const ExperimentConfig& c) {
  std::ostringstream log;
  return run_command(cmd, c, log);
}

int shell(const std::string& args) {
  const char* cli = std::getenv("FRAGTREE_CLI");
  REQUIRE(cli != nullptr);
  int status = std::system((std::string(cli) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("zero replicates give header-only tables") {
  auto c = small("zero");
  c.replicates = 0;
  CHECK(run("moments", c) == kSuccess);
  std::string csv = slurp(fs::path(c.out) / "moments.csv");
  CHECK(csv == "identity,rho,analytic,analytic_untruncated,mc_mean,se,z\n");
  CHECK(slurp(fs::path(c.out) / "moment_tests.csv") == "test,param,statistic,p_value,df\n");
}

TEST_CASE("outputs are byte-identical across runs and worker counts") {
  for (const char* cmd : {"moments", "grow", "brownian-suite", "bifurcate", "check-density"}) {
    CAPTURE(cmd);
    auto a = small(std::string(cmd) + "_a");
    auto b = small(std::string(cmd) + "_b");
    auto w = small(std::string(cmd) + "_w");
    w.workers = 3;
    int ra = run(cmd, a);
    CHECK((ra == kSuccess || ra == kStatisticalFailure));
    CHECK(run(cmd, b) == ra);
    CHECK(run(cmd, w) == ra);
    auto ca = contents(a.out);
    CHECK_FALSE(ca.empty());
    CHECK(ca == contents(b.out));
    CHECK(ca == contents(w.out));
    auto other = small(std::string(cmd) + "_s");
    other.seed = 2;
    run(cmd, other);
    if (std::string(cmd) != "check-density") CHECK(ca != contents(other.out));
  }
}

TEST_CASE("exit codes") {
  auto c = small("codes");
  c.density = "nonsense";
  CHECK(run("moments", c) == kConfigError);
  c = small("codes");
  c.jump_budget = 1;
  CHECK(run("moments", c) == kNumericalError);
  c = small("codes");
  CHECK(run("no-such-command", c) == kConfigError);
  c.z_threshold = 1e-9;
  CHECK(run("moments", c) == kStatisticalFailure);
}

TEST_CASE("grow writes checkpoints and dumps") {
  auto c = small("grow1");
  c.checkpoints = {1};
  c.replicates = 3;
  c.dump_replicates = 1;
  CHECK(run("grow", c) == kSuccess);
  auto files = contents(c.out);
  CHECK(files.count("tree_r0_n1.json") == 1);
  CHECK(files.count("tree_r1_n1.json") == 0);
  std::istringstream rows(files["convergence.csv"]);
  std::string line;
  int count = 0;
  while (std::getline(rows, line)) ++count;
  CHECK(count == 4);
  CHECK(files.count("convergence_summary.csv") == 1);
}

TEST_CASE("check-density") {
  auto c = small("density");
  c.density = "beta(0.3,0.6)";
  CHECK(run("check-density", c) == kSuccess);
  std::string csv = slurp(fs::path(c.out) / "density.csv");
  CHECK(csv.find('\n') < csv.size() - 1);
}

TEST_CASE("command-line binary") {
  CHECK(shell("--help") == 0);
  CHECK(shell("--config /no/such/file moments") == kConfigError);
  CHECK(shell("frobnicate") == kConfigError);
  CHECK(shell("--workers 0 moments") == kConfigError);
  fs::path cfg = scratch("cfg");
  fs::create_directories(cfg);
  std::ofstream(cfg / "bad.cfg") << "seed = 1\nepsilon = two\n";
  CHECK(shell("--config " + (cfg / "bad.cfg").string() + " moments") == kConfigError);
  std::ofstream(cfg / "ok.cfg") << "replicates = 20\nparts = mellin\nout = " << (cfg / "out").string()
                                << "\n";
  CHECK(shell("--config " + (cfg / "ok.cfg").string() + " moments") == kSuccess);
  CHECK(fs::exists(cfg / "out" / "moments.csv"));
}
