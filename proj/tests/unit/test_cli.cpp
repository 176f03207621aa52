#include "ars/dynamics.hpp"
#include "ars/model_io.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ars;
namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("ars_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(ARS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TimeSeries load(const std::string& p) {
  std::ifstream in(p);
  return read_csv(in);
}

Json load_json(const std::string& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

void save(const std::string& p, const TimeSeries& s) {
  std::ofstream out(p);
  write_csv(out, s);
}

}  // namespace

TEST_CASE("generate") {
  REQUIRE(run("--output " + path("circ.csv") + " generate --system circular --n 100 --sigma 0") == 0);
  const TimeSeries circ = load(path("circ.csv"));
  CHECK(circ.length() == 100);
  CHECK(circ.values().col(0).cwiseAbs().maxCoeff() <= 1.0);

  REQUIRE(run("--seed 7 --output " + path("a.csv") + " generate --system circular --n 50 --sigma 0.1") == 0);
  REQUIRE(run("--seed 7 --output " + path("b.csv") + " generate --system circular --n 50 --sigma 0.1") == 0);
  CHECK(slurp(path("a.csv")) == slurp(path("b.csv")));
  REQUIRE(run("--seed 8 --output " + path("c.csv") + " generate --system circular --n 50 --sigma 0.1") == 0);
  CHECK(slurp(path("a.csv")) != slurp(path("c.csv")));

  REQUIRE(run("--output " + path("lor.csv") + " generate --system lorenz --n 100") == 0);
  const TimeSeries lor = load(path("lor.csv"));
  CHECK(lor.dim() == 3);
  CHECK(lor.state(0) == gen_lorenz(2).state(0));
}

TEST_CASE("seed falls back to the environment") {
  ::setenv("ARS_SEED", "7", 1);
  REQUIRE(run("--output " + path("env.csv") + " generate --system circular --n 50 --sigma 0.1") == 0);
  ::unsetenv("ARS_SEED");
  REQUIRE(run("--seed 7 --output " + path("flag.csv") + " generate --system circular --n 50 --sigma 0.1") == 0);
  CHECK(slurp(path("env.csv")) == slurp(path("flag.csv")));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("generate --system pendulum") == 2);
  CHECK(run("generate --system circular --n 0") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("") == 2);
  CHECK(run("--format xml generate --system circular") == 2);
  REQUIRE(run("--output " + path("circ2.csv") + " generate --system circular --n 30") == 0);
  CHECK(run("fit --input " + path("circ2.csv") + " --r 3") == 2);
}

TEST_CASE("runtime errors exit with 1") {
  CHECK(run("fit --input " + path("does_not_exist.csv")) == 1);
  {
    std::ofstream bad(path("bad.csv"));
    bad << "t,x1\n0,1\n1,oops\n";
  }
  CHECK(run("fit --input " + path("bad.csv")) == 1);
  CHECK(run("--output /nonexistent_dir/x.csv generate --system circular") == 1);
}

TEST_CASE("fit AR on exact AR(1) data") {
  Matrix v(30, 1);
  v(0, 0) = 2.0;
  for (Index j = 1; j < 30; ++j) v(j, 0) = -0.7 * v(j - 1, 0);
  save(path("ar1.csv"), TimeSeries(v, 1.0));
  REQUIRE(run("--output " + path("ar1.json") + " fit --input " + path("ar1.csv") + " --model ar --p 1") == 0);
  const Json doc = load_json(path("ar1.json"));
  CHECK(std::abs(doc["coeffs"][0][0].get<double>() + 0.7) < 1e-10);
  CHECK(doc["converged"] == true);
}

TEST_CASE("fit and forecast ARS on circular motion") {
  REQUIRE(run("--output " + path("c100.csv") + " generate --system circular --n 100") == 0);
  REQUIRE(run("--seed 1 --output " + path("ars.json") + " fit --input " + path("c100.csv") +
              " --model ars --r 1 --s-tilde 1") == 0);
  const Json doc = load_json(path("ars.json"));
  CHECK(doc["final_loss"].get<double>() < 1e-10);
  CHECK(doc.contains("converged"));

  // History is the observed column only.
  save(path("hist.csv"), load(path("c100.csv")).leading(1));
  REQUIRE(run("--output " + path("f.csv") + " forecast --model " + path("ars.json") + " --history " +
              path("hist.csv") + " --k 25") == 0);
  const TimeSeries f = load(path("f.csv"));
  CHECK(f.length() == 25);
  const Trajectory truth = gen_circular(125, 1);
  for (Index k = 0; k < 25; ++k) {
    CHECK(std::abs(f.values()(k, 0) - truth.values()(100 + k, 0)) < 1e-4);
    CHECK(f.time(k) == doctest::Approx(truth.time(100 + k)));
  }

  REQUIRE(run("--output " + path("f0.csv") + " forecast --model " + path("ars.json") + " --history " +
              path("hist.csv") + " --k 0") == 0);
  CHECK(slurp(path("f0.csv")) == "t,x1\n");

  CHECK(run("forecast --model " + path("ars.json") + " --history " + path("c100.csv") + " --k 3") == 2);
}

TEST_CASE("identity model repeats the last observation") {
  Json doc = {{"type", "ars"}, {"r", 1},         {"s_tilde", 1},   {"h", 1.0},  {"B", {{1.0, 0.0}, {0.0, 1.0}}},
              {"slack", {{0.5}, {0.25}}},        {"final_loss", 0.0}, {"ridge", 0.0}, {"seed", 0}};
  std::ofstream(path("id.json")) << doc.dump();
  Matrix h(2, 1);
  h << 3.0, 4.5;
  save(path("id_hist.csv"), TimeSeries(h, 1.0));
  REQUIRE(run("--output " + path("id.csv") + " forecast --model " + path("id.json") + " --history " +
              path("id_hist.csv") + " --k 4") == 0);
  const TimeSeries f = load(path("id.csv"));
  CHECK(f.values().col(0) == Vector::Constant(4, 4.5));
}

TEST_CASE("round trip through every format and model type") {
  REQUIRE(run("--output " + path("l.csv") + " generate --system lorenz --n 80") == 0);
  save(path("l_hist.csv"), load(path("l.csv")).leading(2));
  for (const std::string model : {"ar", "ars", "ars-int"}) {
    const std::string json = path("l_" + model + ".json");
    REQUIRE(run("--seed 3 --output " + json + " fit --input " + path("l.csv") + " --model " + model +
                " --r 2 --s-tilde 1 --init truth --max-iters 50 --restarts 0") == 0);
    REQUIRE(run("--output " + path("l_" + model + ".out.json") + " --format json forecast --model " + json +
                " --history " + path("l_hist.csv") + " --k 5") == 0);
    const Json out = load_json(path("l_" + model + ".out.json"));
    CHECK(out["x"].size() == 5);
    CHECK(out["x"][0].size() == 2);
  }
  // Determinism of fit under an explicit seed.
  REQUIRE(run("--seed 3 --output " + path("again.json") + " fit --input " + path("l.csv") +
              " --model ars --r 2 --s-tilde 1 --init truth --max-iters 50 --restarts 0") == 0);
  CHECK(slurp(path("again.json")) == slurp(path("l_ars.json")));
}

TEST_CASE("global options are accepted after the subcommand") {
  const std::string before = path("before.csv");
  const std::string after = path("after.csv");
  REQUIRE(run("--seed 3 --output " + before + " generate --system circular --n 20 --sigma 0.1") == 0);
  REQUIRE(run("generate --system circular --n 20 --sigma 0.1 --seed 3 --output " + after) == 0);
  CHECK(slurp(before) == slurp(after));
}
