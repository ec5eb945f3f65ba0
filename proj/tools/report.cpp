#include "report.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "resum/common.hpp"

namespace resum::cli {

using nlohmann::ordered_json;

bool Report::all_pass() const {
  for (const Record& r : records)
    if (!r.pass) return false;
  return true;
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "text" || s == "text-table") return Format::text;
  throw ResumError(ErrorCode::usage, "unknown report format '" + s + "'");
}

std::string to_json(const Report& r) {
  ordered_json j;
  j["tool_version"] = r.tool_version;
  j["config_hash"] = r.config_hash;
  j["selector"] = r.selector;
  j["seed"] = r.seed;
  j["all_pass"] = r.all_pass();
  ordered_json recs = ordered_json::array();
  for (const Record& x : r.records) {
    ordered_json e;
    e["name"] = x.name;
    e["anchor"] = x.anchor;
    e["measured"] = x.measured;
    e["tolerance"] = x.tolerance;
    e["verdict"] = x.pass ? "pass" : "fail";
    e["detail"] = x.detail;
    recs.push_back(e);
  }
  j["records"] = recs;
  if (r.timing_s >= 0.0) j["timing_s"] = r.timing_s;
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& s) {
  Report r;
  try {
    auto j = ordered_json::parse(s);
    r.tool_version = j.at("tool_version").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.selector = j.at("selector").get<std::string>();
    r.seed = j.at("seed").get<unsigned long long>();
    for (const auto& e : j.at("records")) {
      Record x;
      x.name = e.at("name").get<std::string>();
      x.anchor = e.at("anchor").get<std::string>();
      x.measured = e.at("measured").is_null() ? kNaN : e.at("measured").get<double>();
      x.tolerance = e.at("tolerance").get<std::string>();
      x.pass = e.at("verdict").get<std::string>() == "pass";
      x.detail = e.value("detail", "");
      r.records.push_back(x);
    }
    if (j.contains("timing_s")) r.timing_s = j["timing_s"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ResumError(ErrorCode::config, std::string("report JSON: ") + e.what());
  }
  return r;
}

namespace {

std::string num(double v) {
  std::ostringstream o;
  o << std::setprecision(17) << v;
  return o.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

}  // namespace

std::string to_csv(const Report& r) {
  std::ostringstream o;
  o << "# tool_version=" << r.tool_version << "\n# config_hash=" << r.config_hash << "\n# selector=" << r.selector
    << "\n# seed=" << r.seed << "\n";
  if (r.timing_s >= 0.0) o << "# timing_s=" << num(r.timing_s) << "\n";
  o << "name,anchor,measured,tolerance,verdict,detail\n";
  for (const Record& x : r.records)
    o << csv_field(x.name) << ',' << csv_field(x.anchor) << ',' << num(x.measured) << ',' << csv_field(x.tolerance)
      << ',' << (x.pass ? "pass" : "fail") << ',' << csv_field(x.detail) << "\n";
  return o.str();
}

Report report_from_csv(const std::string& s) {
  Report r;
  std::istringstream in(s);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string k = line.substr(2, eq - 2), v = line.substr(eq + 1);
      if (k == "tool_version") r.tool_version = v;
      else if (k == "config_hash") r.config_hash = v;
      else if (k == "selector") r.selector = v;
      else if (k == "seed") r.seed = std::stoull(v);
      else if (k == "timing_s") r.timing_s = std::stod(v);
      continue;
    }
    if (!header) {
      header = true;
      continue;
    }
    auto f = csv_split(line);
    if (f.size() != 6) throw ResumError(ErrorCode::config, "report CSV: expected 6 fields in '" + line + "'");
    Record x{f[0], f[1], std::stod(f[2]), f[3], f[4] == "pass", f[5]};
    r.records.push_back(x);
  }
  return r;
}

std::string to_text(const Report& r) {
  std::ostringstream o;
  o << "resum " << r.tool_version << "  selector=" << (r.selector.empty() ? "(empty)" : r.selector)
    << "  config=" << r.config_hash << "  seed=" << r.seed << "\n";
  size_t wn = 4;
  for (const Record& x : r.records) wn = std::max(wn, x.name.size());
  o << std::left << std::setw(static_cast<int>(wn) + 2) << "name" << std::setw(6) << "" << std::setw(14) << "measured"
    << std::setw(22) << "tolerance" << "anchor\n";
  for (const Record& x : r.records) {
    char m[32];
    std::snprintf(m, sizeof m, "%.6g", x.measured);
    o << std::setw(static_cast<int>(wn) + 2) << x.name << std::setw(6) << (x.pass ? "PASS" : "FAIL") << std::setw(14)
      << m << std::setw(22) << x.tolerance << x.anchor << "\n";
    if (!x.detail.empty()) o << "    " << x.detail << "\n";
  }
  int fails = 0;
  for (const Record& x : r.records) fails += !x.pass;
  o << r.records.size() << " checks, " << fails << " failed";
  if (r.timing_s >= 0.0) o << ", " << std::setprecision(3) << r.timing_s << " s";
  o << "\n";
  return o.str();
}

std::string render(const Report& r, Format f) {
  switch (f) {
    case Format::json: return to_json(r);
    case Format::csv: return to_csv(r);
    case Format::text: return to_text(r);
  }
  return {};
}

std::string hash_hex(const std::string& s) {
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

}  // namespace resum::cli
