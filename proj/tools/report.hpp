#pragma once

#include <string>
#include <vector>

namespace resum::cli {

inline constexpr const char* kToolVersion = "0.3.0";

struct Record {
  std::string name;
  std::string anchor;     // quoted statement being checked, or "plumbing"
  double measured = 0.0;
  std::string tolerance;  // human-readable acceptance region
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string tool_version = kToolVersion;
  std::string config_hash;
  std::string selector;
  unsigned long long seed = 0;
  std::vector<Record> records;
  double timing_s = -1.0;  // negative: not recorded

  bool all_pass() const;
};

enum class Format { json, csv, text };
Format parse_format(const std::string& s);  // usage error on anything else

std::string to_json(const Report& r);
std::string to_csv(const Report& r);
std::string to_text(const Report& r);
std::string render(const Report& r, Format f);

Report report_from_json(const std::string& s);
/// header fields travel in leading '#' lines
Report report_from_csv(const std::string& s);

/// FNV-1a, hex
std::string hash_hex(const std::string& s);

}  // namespace resum::cli
