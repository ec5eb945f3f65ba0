#pragma once

#include <string>
#include <vector>

#include "report.hpp"

namespace resum::cli {

struct ExperimentConfig {
  std::string weight;      // JSON or canonical string; empty means the suite's own weight
  double tol = 1e-10;
  std::string selector;
  unsigned long long seed = 7;
  std::string cache_dir;
  bool offline = false;    // kernel caches must already exist

  std::string canonical() const;  // stable text form hashed into the report
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;
};
const std::vector<Criterion>& criteria();

/// "", "borel-sanity", "duality", "criterion-<n>", "acceptance"
std::vector<std::string> selectors();
std::vector<Record> run_selector(const std::string& selector, const ExperimentConfig& cfg);
std::vector<Record> run_criterion(int id, const ExperimentConfig& cfg);

/// runs the selector and stamps version, hash and seed
Report run_experiment(const ExperimentConfig& cfg);

/// kernel cache under dir; reuses a matching file and only evaluates missing t
std::string cache_kernel(const std::string& weight_spec, double t_min, double t_max, int n, const std::string& dir,
                         bool offline, bool* rewritten = nullptr, bool* warning = nullptr);

}  // namespace resum::cli
