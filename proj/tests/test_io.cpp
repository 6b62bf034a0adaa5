#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "holo/io.hpp"

using namespace holo;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}
}  // namespace

TEST_CASE("csv writer: deterministic bodies") {
  const std::string path = "/tmp/holo_test_io.csv";
  for (int rep = 0; rep < 2; ++rep) {
    CsvWriter w(path);
    REQUIRE(w.ok());
    w.comment("model: two_level");
    w.columns({"theta", "E_1", "E_2"});
    w.row({0.0, -1.0, 1.0});
    w.row({0.1234567890123456789, -0.99, 0.99});
  }
  const std::string a = slurp(path);
  {
    CsvWriter w(path);
    w.comment("model: two_level");
    w.columns({"theta", "E_1", "E_2"});
    w.row({0.0, -1.0, 1.0});
    w.row({0.1234567890123456789, -0.99, 0.99});
  }
  CHECK(slurp(path) == a);
  std::remove(path.c_str());
}

TEST_CASE("run config: canonical round-trip") {
  RunConfig cfg;
  cfg.command = "dynamics";
  cfg.spec = ModelSpec::three_level(1.0);
  cfg.theta_min = -2.0 * M_PI;
  cfg.theta_max = 6.0 * M_PI;
  cfg.grid = 2048;
  cfg.taus = {50.0, 200.0, 1e6};
  cfg.eps = 3e-3;
  cfg.out_dir = "out";
  cfg.jobs = 4;
  cfg.only = "holonomy";
  cfg.plot_script = true;

  const std::string text = cfg.to_kv();
  const RunConfig back = RunConfig::from_kv(text);
  CHECK(back.to_kv() == text);
}
