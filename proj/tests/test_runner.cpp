#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "dwave/config.hpp"
#include "dwave/io.hpp"
#include "dwave/runner.hpp"

using namespace dwave;

namespace {

std::string temp_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("dwave_test_" + tag);
  std::filesystem::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("config validation produces field-level messages") {
  ExperimentConfig cfg;
  cfg.validate();
  cfg.suite = "nope";
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("config.suite"),
                       std::invalid_argument);
  cfg = ExperimentConfig{};
  cfg.t_end = -1.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("config.t_end"),
                       std::invalid_argument);
  cfg = ExperimentConfig{};
  cfg.half_width = 10.0;  // far below the sizing rule
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("config.half_width"),
                       std::invalid_argument);
  cfg = ExperimentConfig{};
  cfg.sigma_dx = 1.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("config.sigma_dx"),
                       std::invalid_argument);
}

TEST_CASE("config hash tracks content") {
  ExperimentConfig a, b;
  CHECK(a.hash() == b.hash());
  b.t_end = 400.0;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("identities suite passes and writes a report") {
  ExperimentConfig cfg;
  const std::string dir = temp_dir("identities");
  const SuiteResult res = run_suite("identities", cfg, dir);
  for (const auto& c : res.claims) {
    INFO(c.id, " measured=", c.measured, " expected=", c.expected);
    CHECK(c.pass);
  }
  CHECK(std::filesystem::exists(dir + "/report.json"));
  CHECK(std::filesystem::exists(dir + "/report.csv"));
  CHECK(std::filesystem::exists(dir + "/manifest.json"));
  const auto rows = aggregate_reports({dir});
  CHECK(rows.size() == res.claims.size());
  std::filesystem::remove_all(dir);
}

TEST_CASE("waves suite passes on the default masses and on zero masses") {
  ExperimentConfig cfg;
  cfg.dx = 0.1;  // cheaper quadrature grid for the suite
  for (double m : {0.02, 0.0}) {
    cfg.mass1 = cfg.mass2 = m;
    const SuiteResult res = run_suite("waves-only", cfg, "");
    for (const auto& c : res.claims) {
      INFO(c.id, " measured=", c.measured, " expected=", c.expected, " m=", m);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("cascade dump reruns byte-identically") {
  ExperimentConfig cfg;
  cfg.t_end = 4.0;
  cfg.dx = 0.1;
  cfg.n_max = 1;
  cfg.mass1 = 0.03;
  cfg.mass2 = 0.02;
  cfg.dump_fields = "all";
  const std::string d1 = temp_dir("rerun1"), d2 = temp_dir("rerun2");
  run_cascade_dump(cfg, d1);
  run_cascade_dump(cfg, d2);
  int compared = 0;
  for (const auto& e : std::filesystem::directory_iterator(d1)) {
    const auto name = e.path().filename().string();
    if (name.find(".csv") == std::string::npos) continue;
    CHECK(read_text(d1 + "/" + name) == read_text(d2 + "/" + name));
    ++compared;
  }
  CHECK(compared > 0);
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}

TEST_CASE("aggregate carries failures through") {
  ExperimentConfig cfg;
  const std::string dir = temp_dir("agg");
  ensure_dir(dir);
  // a hand-made failing report
  write_text(dir + "/report.json",
             R"({"suite":"demo","claims":[{"id":"x","target":"t","kind":"within",)"
             R"("measured":1.0,"expected":0.0,"tol":0.5,"r_squared":-1.0,"pass":false}]})");
  const auto rows = aggregate_reports({dir});
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].pass);
  CHECK_THROWS_AS(aggregate_reports({dir + "/missing"}), std::runtime_error);
  std::filesystem::remove_all(dir);
}
