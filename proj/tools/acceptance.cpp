// One line per acceptance criterion; exit status is the number of failing criteria.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "suites.hpp"

using namespace resum::cli;

int main(int argc, char** argv) {
  ExperimentConfig cfg;
  if (const char* d = std::getenv("RESUM_CACHE_DIR"); d && *d) cfg.cache_dir = d;
  bool verbose = argc > 1 && std::string(argv[1]) == "-v";
  int failed = 0;
  for (const Criterion& c : criteria()) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Record> recs;
    std::string err;
    try {
      recs = run_criterion(c.id, cfg);
    } catch (const std::exception& e) {
      err = e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = err.empty() && !recs.empty() && dt < c.time_limit_s;
    std::string why = err;
    for (const Record& r : recs) {
      if (!r.pass) {
        ok = false;
        if (why.empty()) why = r.name + " " + r.detail;
      }
    }
    if (dt >= c.time_limit_s && why.empty()) why = "over time limit";
    std::printf("%s  criterion %2d  %-32s %7.2f s (limit %g s)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.title, dt,
                c.time_limit_s, why.empty() ? "" : "  ", why.c_str());
    if (verbose)
      for (const Record& r : recs)
        std::printf("      %-36s %s  %-12.6g %s  %s\n", r.name.c_str(), r.pass ? "pass" : "fail", r.measured,
                    r.tolerance.c_str(), r.detail.c_str());
    std::fflush(stdout);
    failed += !ok;
  }
  return failed;
}
