#include <json.hpp>

#include "resum/weights.hpp"

namespace resum {

namespace {

using nlohmann::json;

Weight from_json(const json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "denjoy") {
    MultiIndex mi;
    mi.alpha0 = j.value("alpha0", 0.0);
    if (j.contains("alphas"))
      for (const auto& p : j.at("alphas")) mi.alphas.emplace_back(p.at(0).get<int>(), p.at(1).get<double>());
    return make_denjoy_weight(mi);
  }
  if (type == "raw_gamma") {
    std::string fam = j.at("family").get<std::string>();
    double p = j.value("param", 0.0);
    if (fam == "borel") return make_raw_weight(RawFamily::borel);
    if (fam == "mittag_leffler") return make_raw_weight(RawFamily::mittag_leffler, p);
    if (fam == "constant") return make_raw_weight(RawFamily::constant, p);
    if (fam == "power") return make_raw_weight(RawFamily::power, p);
    throw ResumError(ErrorCode::config, "unknown raw_gamma family '" + fam + "'");
  }
  if (type == "derived") {
    Weight base = from_json(j.at("base"));
    std::string d = j.at("derivation").get<std::string>();
    if (d == "dual") return derive_weight(base, Derivation::dual);
    if (d == "harmonic_mean") return derive_weight(base, Derivation::harmonic_mean);
    if (d == "ratio") return derive_weight(base, Derivation::ratio);
    if (d == "family") return derive_weight(base, Derivation::family, j.at("a").get<double>());
    throw ResumError(ErrorCode::config, "unknown derivation '" + d + "'");
  }
  throw ResumError(ErrorCode::config, "unknown weight type '" + type + "'");
}

json to_json(const Weight& w) {
  json j;
  switch (w.kind()) {
    case WeightKind::denjoy: {
      const MultiIndex& mi = *w.multi_index();
      j["type"] = "denjoy";
      j["alpha0"] = mi.alpha0;
      j["alphas"] = json::array();
      for (auto [k, a] : mi.alphas) j["alphas"].push_back({k, a});
      break;
    }
    case WeightKind::raw_gamma: {
      j["type"] = "raw_gamma";
      const char* names[] = {"borel", "mittag_leffler", "constant", "power"};
      j["family"] = names[static_cast<int>(w.raw_family())];
      if (w.raw_family() != RawFamily::borel) j["param"] = w.raw_param();
      break;
    }
    case WeightKind::derived: {
      j["type"] = "derived";
      j["base"] = to_json(*w.base());
      const char* names[] = {"dual", "harmonic_mean", "family", "ratio"};
      j["derivation"] = names[static_cast<int>(w.derivation())];
      if (w.derivation() == Derivation::family) j["a"] = w.family_a();
      break;
    }
  }
  return j;
}

// canonical string grammar:
//   denjoy:a0=<x>[;k:<a>]* | raw:borel | raw:<family>:<p> | dual(<w>) | ratio(<w>)
//   | harmonic_mean(<w>) | family:<a>(<w>)
Weight from_canonical(const std::string& s) {
  auto inner = [&](size_t open) {
    if (s.back() != ')') throw ResumError(ErrorCode::config, "unbalanced weight string '" + s + "'");
    return from_canonical(s.substr(open + 1, s.size() - open - 2));
  };
  if (s.rfind("denjoy:", 0) == 0) {
    MultiIndex mi;
    std::string rest = s.substr(7);
    size_t pos = 0;
    while (pos <= rest.size()) {
      size_t next = rest.find(';', pos);
      std::string tok = rest.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      if (tok.rfind("a0=", 0) == 0) {
        mi.alpha0 = std::stod(tok.substr(3));
      } else if (!tok.empty()) {
        size_t c = tok.find(':');
        if (c == std::string::npos) throw ResumError(ErrorCode::config, "bad denjoy term '" + tok + "'");
        mi.alphas.emplace_back(std::stoi(tok.substr(0, c)), std::stod(tok.substr(c + 1)));
      }
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    return make_denjoy_weight(mi);
  }
  if (s == "raw:borel" || s == "borel") return make_raw_weight(RawFamily::borel);
  if (s.rfind("raw:", 0) == 0) {
    size_t c = s.find(':', 4);
    if (c == std::string::npos) throw ResumError(ErrorCode::config, "raw weight needs a parameter: '" + s + "'");
    std::string fam = s.substr(4, c - 4);
    double p = std::stod(s.substr(c + 1));
    if (fam == "mittag_leffler") return make_raw_weight(RawFamily::mittag_leffler, p);
    if (fam == "constant") return make_raw_weight(RawFamily::constant, p);
    if (fam == "power") return make_raw_weight(RawFamily::power, p);
    throw ResumError(ErrorCode::config, "unknown raw family '" + fam + "'");
  }
  if (s.rfind("dual(", 0) == 0) return derive_weight(inner(4), Derivation::dual);
  if (s.rfind("ratio(", 0) == 0) return derive_weight(inner(5), Derivation::ratio);
  if (s.rfind("harmonic_mean(", 0) == 0) return derive_weight(inner(13), Derivation::harmonic_mean);
  if (s.rfind("family:", 0) == 0) {
    size_t open = s.find('(');
    if (open == std::string::npos) throw ResumError(ErrorCode::config, "bad family string '" + s + "'");
    double a = std::stod(s.substr(7, open - 7));
    return derive_weight(inner(open), Derivation::family, a);
  }
  throw ResumError(ErrorCode::config, "unrecognised weight '" + s + "'");
}

}  // namespace

Weight parse_weight(const std::string& spec) {
  try {
    if (!spec.empty() && spec.front() == '{') return from_json(json::parse(spec));
    return from_canonical(spec);
  } catch (const json::exception& e) {
    throw ResumError(ErrorCode::config, std::string("weight JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ResumError(ErrorCode::config, "bad number in weight '" + spec + "'");
  }
}

std::string weight_to_json(const Weight& w) { return to_json(w).dump(); }

}  // namespace resum
