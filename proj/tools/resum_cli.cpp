#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "report.hpp"
#include "resum/jets_and_classes.hpp"
#include "resum/special_functions.hpp"
#include "resum/transforms.hpp"
#include "resum/weights.hpp"
#include "suites.hpp"

using namespace resum;
using namespace resum::cli;
using nlohmann::ordered_json;

namespace {

struct Globals {
  std::string weight;
  double tol = 1e-10;
  std::string out;
  std::string cache_dir = ".resum-cache";
  unsigned long long seed = 7;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw ResumError(ErrorCode::io, "cannot write " + g.out);
  f << text;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ResumError(ErrorCode::io, "cannot read " + path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

/// "@file" reads the file, anything else is taken literally
std::string arg_or_file(const std::string& a) { return !a.empty() && a[0] == '@' ? slurp(a.substr(1)) : a; }

cplx parse_complex(const std::string& s) {
  auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ResumError(ErrorCode::usage, "expected re[,im], got '" + s + "'");
  }
}

Weight weight_or(const Globals& g, const Weight& fallback) { return g.weight.empty() ? fallback : parse_weight(g.weight); }

ordered_json eval_json(const EvalResult& r) {
  ordered_json j;
  j["log_abs"] = r.log_mag;
  j["phase"] = r.phase;
  j["error"] = r.error;
  j["method"] = to_string(r.method);
  j["flagged"] = r.flagged;
  return j;
}

int weight_info(const Globals& g) {
  Weight w = weight_or(g, log_weight());
  ordered_json j;
  j["canonical"] = w.canonical();
  j["spec"] = ordered_json::parse(weight_to_json(w));
  j["quasianalyticity"] = to_string(quasianalyticity_test(w));
  j["sector_half_angle"] = w.sector_half_angle();
  j["rho0"] = w.rho0();
  ordered_json samples = ordered_json::array();
  for (double rho : {0.0, 1.0, 10.0, 1e3, 1e6, 1e9}) {
    ordered_json s;
    s["rho"] = rho;
    s["L"] = w.L(rho);
    s["eps"] = w.eps(rho);
    s["log_gamma"] = w.log_gamma(rho);
    samples.push_back(s);
  }
  j["samples"] = samples;
  ordered_json reg = ordered_json::array();
  for (const auto& e : check_regularity(w, log_grid(std::max(1e3, w.rho0()), 1e9, 16)).entries)
    reg.push_back({{"name", e.name}, {"verdict", to_string(e.verdict)}, {"trend", e.trend}});
  j["regularity"] = reg;
  emit(g, j.dump(2) + "\n");
  return 0;
}

SeriesKind parse_kind(const std::string& k) {
  if (k == "E") return SeriesKind::E;
  if (k == "E1") return SeriesKind::E1;
  if (k == "Etilde") return SeriesKind::Etilde;
  if (k == "Estar") return SeriesKind::Estar;
  throw ResumError(ErrorCode::usage, "unknown function kind '" + k + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized moment summation of divergent Taylor jets"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--weight", g.weight, "weight as JSON or canonical string, @file reads a file");
  app.add_option("--tol", g.tol, "target tolerance");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--cache-dir", g.cache_dir, "kernel cache directory; RESUM_CACHE_DIR wins");
  app.add_option("--seed", g.seed, "seed for randomized checks");

  auto* info = app.add_subcommand("weight-info", "evaluate a weight, its quasianalyticity and regularity");

  auto* kern = app.add_subcommand("kernel", "build or reuse a kernel cache");
  double t_min = 0.01, t_max = 50.0;
  int n_t = 64;
  bool offline = false;
  kern->add_option("--t-min", t_min);
  kern->add_option("--t-max", t_max);
  kern->add_option("--n", n_t, "log-spaced samples");
  kern->add_flag("--offline", offline, "fail instead of computing a missing cache");

  auto* efun = app.add_subcommand("efun", "evaluate E, E1, Etilde or E*");
  std::string kind = "E";
  std::vector<std::string> zs;
  efun->add_option("--kind", kind)->check(CLI::IsMember({"E", "E1", "Etilde", "Estar"}));
  efun->add_option("--z", zs, "re[,im]")->required();

  auto* sum = app.add_subcommand("sum", "regular transform of the singular transform of a jet");
  std::string jet_arg;
  std::vector<std::string> xs{"1"};
  sum->add_option("--jet", jet_arg, "jet JSON or @file")->required();
  sum->add_option("--x", xs, "re[,im]; default 1 (the moment sum)");

  auto* rec = app.add_subcommand("recover", "Chebyshev-jet a sampled function and sum it back");
  std::string fname = "1/(2-x)";
  int degree = 40, points = 11;
  rec->add_option("--function", fname)->check(CLI::IsMember({"1/(2-x)", "exp", "sin"}));
  rec->add_option("--degree", degree);
  rec->add_option("--points", points);

  auto* ver = app.add_subcommand("verify", "run a named check suite");
  std::string selector = "acceptance", format = "json";
  bool no_timing = false, list = false;
  ver->add_option("--select", selector, "suite name; empty runs nothing");
  ver->add_option("--format", format, "json, csv or text");
  ver->add_flag("--no-timing", no_timing, "omit wall time (byte-identical reports)");
  ver->add_flag("--list", list, "print the selector names");

  auto* dual = app.add_subcommand("duality", "dual weight and the Carleson-Ehrenpreis comparison");
  std::string dual_format = "json";
  dual->add_option("--format", dual_format);

  auto* cex = app.add_subcommand("counterexample", "lacunary jet outside a larger class");
  std::string l2 = "denjoy:a0=0;1:2";
  int terms = 3, order = 32;
  cex->add_option("--l2", l2, "the larger weight");
  cex->add_option("--terms", terms);
  cex->add_option("--jet-order", order);

  auto* exp = app.add_subcommand("export", "convert a saved report between formats");
  std::string in_path, exp_format = "text";
  exp->add_option("--in", in_path)->required();
  exp->add_option("--format", exp_format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (const char* env = std::getenv("RESUM_CACHE_DIR"); env && *env) g.cache_dir = env;
  if (!g.weight.empty()) g.weight = arg_or_file(g.weight);

  try {
    if (*info) return weight_info(g);

    if (*kern) {
      bool rewritten = false, warning = false;
      std::string spec = g.weight.empty() ? log_weight().canonical() : g.weight;
      std::string path = cache_kernel(spec, t_min, t_max, n_t, g.cache_dir, offline, &rewritten, &warning);
      ordered_json j{{"path", path}, {"rewritten", rewritten}, {"warning_R1", warning}};
      emit(g, j.dump(2) + "\n");
      if (warning) std::cerr << "warning: weight fails (R1); kernel computed anyway\n";
      return 0;
    }

    if (*efun) {
      SeriesEvaluator se(weight_or(g, log_weight()), parse_kind(kind));
      ordered_json arr = ordered_json::array();
      for (const std::string& s : zs) {
        cplx z = parse_complex(s);
        ordered_json e = eval_json(eval_series_function(se, z, g.tol));
        e["z"] = {z.real(), z.imag()};
        arr.push_back(e);
      }
      emit(g, arr.dump(2) + "\n");
      return 0;
    }

    if (*sum) {
      Weight w = weight_or(g, log_weight());
      Jet jet = jet_from_json(arg_or_file(jet_arg));
      KernelEvaluator ke(w);
      EntireRep rep = singular_transform(jet, w);
      ordered_json arr = ordered_json::array();
      for (const std::string& s : xs) {
        cplx x = parse_complex(s);
        auto r = ordered_json::parse(summation_to_json(regular_transform(rep, ke, x)));
        r["x"] = {x.real(), x.imag()};
        arr.push_back(r);
      }
      emit(g, arr.dump(2) + "\n");
      return 0;
    }

    if (*rec) {
      Weight w = weight_or(g, log_weight());
      std::function<long double(long double)> f;
      if (fname == "exp") f = [](long double x) { return std::exp(x); };
      else if (fname == "sin") f = [](long double x) { return std::sin(x); };
      else f = [](long double x) { return 1 / (2 - x); };
      if (points < 2) throw ResumError(ErrorCode::usage, "need at least 2 points");
      auto ce = chebyshev_expand(f, -1.0, 1.0, degree, fname);
      EntireRep rep = singular_transform(ce.to_jet(), w);
      KernelEvaluator ke(w);
      ordered_json pts = ordered_json::array();
      double worst = 0.0;
      for (int i = 0; i < points; ++i) {
        double x = -1.0 + 2.0 * i / (points - 1);
        SummationResult r = regular_transform(rep, ke, x);
        double err = std::abs(r.value - cplx(static_cast<double>(f(x))));
        worst = std::max(worst, err);
        pts.push_back({{"x", x}, {"value", r.value.real()}, {"error", err}, {"error_estimate", r.error}});
      }
      ordered_json j{{"function", fname}, {"weight", w.canonical()}, {"degree", degree},
                     {"max_error", worst}, {"points", pts}};
      emit(g, j.dump(2) + "\n");
      return worst <= std::max(g.tol, 1e-4) ? 0 : 1;
    }

    if (*ver || *dual) {
      if (list) {
        std::string s;
        for (const std::string& x : selectors()) s += (x.empty() ? "\"\"" : x) + "\n";
        emit(g, s);
        return 0;
      }
      ExperimentConfig cfg;
      cfg.weight = g.weight;
      cfg.tol = g.tol;
      cfg.seed = g.seed;
      cfg.cache_dir = g.cache_dir;
      cfg.selector = *dual ? "duality" : selector;
      Format fmt = parse_format(*dual ? dual_format : format);
      auto t0 = std::chrono::steady_clock::now();
      Report r = run_experiment(cfg);
      if (!no_timing) r.timing_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      emit(g, render(r, fmt));
      return r.all_pass() ? 0 : 1;
    }

    if (*cex) {
      Weight w = weight_or(g, exp_log_weight(1.0 / 3.0));
      LacunaryJet lj = lacunary_counterexample_jet(w, parse_weight(l2), terms, order);
      ordered_json cert = ordered_json::array();
      bool all = true;
      for (const auto& c : lj.certificate) {
        cert.push_back({{"log_n", c.log_n}, {"r", c.r}, {"log_F_lower", c.log_F_lower}, {"log_E2", c.log_E2},
                        {"exceeds", c.exceeds()}});
        all = all && c.exceeds();
      }
      ordered_json j{{"weight", w.canonical()}, {"L2", parse_weight(l2).canonical()}, {"log_n", lj.log_n},
                     {"log_coef", lj.log_coef}, {"delta", lj.delta}, {"A", lj.A}, {"certificate", cert},
                     {"jet", ordered_json::parse(jet_to_json(lj.jet))}};
      emit(g, j.dump(2) + "\n");
      return all ? 0 : 1;
    }

    if (*exp) {
      std::string s = slurp(in_path);
      auto first = s.find_first_not_of(" \t\r\n");
      Report r = first != std::string::npos && s[first] == '{' ? report_from_json(s) : report_from_csv(s);
      emit(g, render(r, parse_format(exp_format)));
      return 0;
    }
  } catch (const ResumError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
