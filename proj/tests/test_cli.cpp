#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "report.hpp"
#include "resum/special_functions.hpp"
#include "suites.hpp"

using namespace resum;
using namespace resum::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("resum_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("empty selector gives an empty passing report") {
    ExperimentConfig cfg;
    Report r = run_experiment(cfg);
    CHECK(r.records.empty());
    CHECK(r.all_pass());
    CHECK_THROWS_AS(run_selector("no-such-suite", cfg), ResumError);
    CHECK_THROWS_AS(run_selector("criterion-14", cfg), ResumError);
  }

  TEST_CASE("borel sanity suite") {
    ExperimentConfig cfg;
    cfg.selector = "borel-sanity";
    Report r = run_experiment(cfg);
    REQUIRE(r.records.size() == 2);
    CHECK(r.all_pass());
    for (const Record& x : r.records) CHECK(!x.anchor.empty());
  }

  TEST_CASE("reports are deterministic and carry the config") {
    ExperimentConfig cfg;
    cfg.selector = "criterion-13";
    std::string a = to_json(run_experiment(cfg)), b = to_json(run_experiment(cfg));
    CHECK(a == b);
    CHECK(a.find("\"seed\": 7") != std::string::npos);
    ExperimentConfig other = cfg;
    other.seed = 8;
    CHECK(run_experiment(other).config_hash != run_experiment(cfg).config_hash);
  }

  TEST_CASE("json and csv round trips") {
    Report r;
    r.selector = "demo";
    r.config_hash = hash_hex("demo");
    r.seed = 3;
    r.records.push_back({"a", "K(t)=e^{-t} and E(z)=e^{z}", 1.25e-7, "<= 1e-6", true, "plain"});
    r.records.push_back({"b, quoted", "plumbing", -0.1, "in [0, 1]", false, "has \"quotes\", commas"});
    Report j = report_from_json(to_json(r));
    Report c = report_from_json(to_json(report_from_csv(to_csv(j))));
    REQUIRE(c.records.size() == 2);
    for (size_t i = 0; i < 2; ++i) {
      CHECK(c.records[i].name == r.records[i].name);
      CHECK(c.records[i].anchor == r.records[i].anchor);
      CHECK(c.records[i].measured == r.records[i].measured);
      CHECK(c.records[i].tolerance == r.records[i].tolerance);
      CHECK(c.records[i].pass == r.records[i].pass);
      CHECK(c.records[i].detail == r.records[i].detail);
    }
    CHECK(c.config_hash == r.config_hash);
    CHECK(c.seed == 3);
    CHECK(to_text(r).find("K(t)=e^{-t} and E(z)=e^{z}") != std::string::npos);
    CHECK_THROWS_AS(parse_format("xml"), ResumError);
  }

  TEST_CASE("kernel cache") {
    fs::path dir = scratch_dir("cache");
    bool rewritten = false, warning = true;
    std::string path = cache_kernel("raw:borel", 0.01, 50.0, 24, dir.string(), false, &rewritten, &warning);
    CHECK(rewritten);
    CHECK(warning);  // L(rho) ~ rho/e for Gamma, so (R1) fails here too
    KernelEvaluator ke(borel_weight());
    REQUIRE(ke.load_cache(path));
    for (auto& [t, s] : ke.cached()) CHECK(std::abs(std::expm1(s.log_abs + t)) < 1e-6);
    auto stamp = fs::last_write_time(path);
    CHECK(cache_kernel("raw:borel", 0.01, 50.0, 24, dir.string(), false, &rewritten) == path);
    CHECK(!rewritten);
    CHECK(fs::last_write_time(path) == stamp);
    CHECK_THROWS_AS(cache_kernel("raw:borel", 0.01, 20.0, 24, dir.string(), true), ResumError);
    fs::remove_all(dir);
  }

  TEST_CASE("fast weight proceeds with a warning") {
    fs::path dir = scratch_dir("power");
    bool warning = false;
    CHECK_NOTHROW(cache_kernel("raw:power:1", 0.1, 5.0, 4, dir.string(), false, nullptr, &warning));
    CHECK(warning);
    fs::remove_all(dir);
  }
}
