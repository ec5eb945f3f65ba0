#include "resum/transforms.hpp"

#include <functional>
#include <map>

#include <json.hpp>

namespace resum {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::sampled: return "sampled";
    case Provenance::analytic: return "analytic";
    case Provenance::synthetic: return "synthetic";
  }
  return "?";
}

namespace {

cplx safe_log(cplx v) { return v == cplx(0.0) ? cplx(-kInf, 0.0) : std::log(v); }
cplx from_log(cplx l) { return l.real() == -kInf ? cplx(0.0) : std::exp(l); }

// running complex sum kept as exp(scale) * sum
struct LogAcc {
  double scale = -kInf;
  cplx sum = 0.0;
  double l1 = 0.0, err = 0.0;

  void add(double sc, cplx v, double a1, double e) {
    if (!(std::abs(v) > 0.0) && a1 == 0.0) return;
    if (scale == -kInf) scale = sc;
    if (sc > scale + 300.0) {
      double f = std::exp(scale - sc);
      sum *= f, l1 *= f, err *= f;
      scale = sc;
    }
    double f = std::exp(sc - scale);
    sum += v * f;
    l1 += a1 * f;
    err += e * f;
  }
  cplx value() const { return scale == -kInf ? cplx(0.0) : sum * std::exp(scale); }
  cplx log_value() const { return scale == -kInf || sum == cplx(0.0) ? cplx(-kInf, 0.0) : scale + std::log(sum); }
  double abs(double x) const { return scale == -kInf ? 0.0 : x * std::exp(scale); }
};

}  // namespace

cplx Jet::a(int n) const {
  if (n <= N()) return from_log(log_a[n]);
  if (tail) return tail->c * std::pow(tail->q, n);
  return 0.0;
}

Jet Jet::from_values(const std::vector<cplx>& a, Provenance p) {
  Jet j;
  j.provenance = p;
  for (cplx v : a) j.log_a.push_back(safe_log(v));
  return j;
}

Jet Jet::geometric(cplx c, cplx q, int N) {
  Jet j;
  j.provenance = Provenance::analytic;
  for (int n = 0; n <= N; ++n) j.log_a.push_back(safe_log(c) + static_cast<double>(n) * safe_log(q));
  j.tail = Geometric{c, q};
  return j;
}

EntireRep singular_transform(const Jet& jet, const Weight& w) {
  EntireRep r;
  r.w = w;
  r.tail = jet.tail;
  for (int n = 0; n <= jet.N(); ++n) r.log_b.push_back(jet.log_a[n] - w.log_gamma(n + 1.0));
  if (jet.tail) {
    // b_n = c q^n / gamma(n+1): entire iff gamma(n+1)^{1/n} outgrows |q|
    double aq = std::abs(jet.tail->q);
    double r2 = std::exp(w.log_gamma(1e2 + 1) / 1e2), r8 = std::exp(w.log_gamma(1e8 + 1) / 1e8);
    if (aq > 0.0 && r8 < 2.0 * r2) {
      r.entire = false;
      r.radius = r8 / aq;
    }
  } else if (jet.N() >= 8) {
    int N = jet.N(), m = N / 2;
    auto v = [&](int n) { return r.log_b[n].real() / n; };
    if (r.log_b[N].real() > -kInf && r.log_b[m].real() > -kInf && !(v(N) < v(m) - 0.05)) {
      r.entire = false;
      r.radius = std::exp(-v(N));
    }
  }
  return r;
}

Jet inverse_singular(const EntireRep& rep) {
  Jet j;
  j.tail = rep.tail;
  j.provenance = Provenance::analytic;
  for (size_t n = 0; n < rep.log_b.size(); ++n) j.log_a.push_back(rep.log_b[n] + rep.w.log_gamma(n + 1.0));
  return j;
}

EvalResult EntireRep::eval(cplx z, double tol) const {
  // finite part d_n z^n, d_n = b_n minus the tail's own contribution
  std::vector<cplx> lt;
  for (size_t n = 0; n < log_b.size(); ++n) {
    cplx ld = log_b[n];
    if (tail) {
      double lg = w.log_gamma(n + 1.0);
      cplx d = from_log(log_b[n] + lg) - tail->c * std::pow(tail->q, static_cast<double>(n));
      if (std::abs(d) <= 1e-15 * std::abs(from_log(log_b[n] + lg))) continue;
      ld = safe_log(d) - lg;
    }
    if (ld.real() == -kInf) continue;
    lt.push_back(ld + (n == 0 ? cplx(0.0) : static_cast<double>(n) * safe_log(z)));
  }
  LogAcc acc;
  for (cplx l : lt) acc.add(l.real(), std::polar(1.0, l.imag()), 1.0, 0.0);
  // relative rounding of the finite part, in units of its largest terms
  double fin_err = 4e-16 * std::max<size_t>(1, lt.size()) * acc.l1;
  if (tail && tail->c != cplx(0.0)) {
    SeriesEvaluator se(w, SeriesKind::E);
    EvalResult e = eval_series_function(se, tail->q * z, std::max(tol, 1e-14));
    cplx le = e.log() + std::log(tail->c);
    LogAcc tot;
    tot.add(le.real(), std::polar(1.0, le.imag()), 1.0, e.error);
    if (acc.scale > -kInf) tot.add(acc.scale, acc.sum, acc.l1, fin_err);
    cplx lv = tot.log_value();
    double rel = lv.real() == -kInf ? kInf : tot.err / std::abs(tot.sum);
    EvalResult r = EvalResult::from_log(lv, rel, e.method);
    r.flagged = e.flagged;
    r.cancellation = std::max(e.cancellation, lv.real() == -kInf ? kInf : tot.l1 / std::abs(tot.sum));
    return r;
  }
  cplx lv = acc.log_value();
  EvalResult r = EvalResult::from_log(lv, 0.0, EvalMethod::series);
  if (lv.real() == -kInf) {
    r.log_mag = -kInf, r.error = 1e-16;
    return r;
  }
  r.error = std::max(fin_err / std::abs(acc.sum), 1e-16);
  r.cancellation = acc.l1 / std::abs(acc.sum);
  return r;
}

namespace {

void check_pairing(const EntireRep& rep, const KernelEvaluator& ke) {
  if (rep.w.canonical() != ke.mellin_weight().canonical())
    throw ResumError(ErrorCode::precondition, "representation and kernel built from different weights");
}

}  // namespace

SummationResult regular_transform(const EntireRep& rep, const KernelEvaluator& ke, cplx x,
                                  const QuadratureSpec& quad) {
  check_pairing(rep, ke);
  const double u_lo = -18.0, h = 0.5, u_max = std::log(1e6);
  SummationResult res;
  res.kernel_cache_id = ke.cache_id();
  res.t_lo = std::exp(u_lo);

  int evals = 0;
  double node_err = 0.0, peak_low = kInf;  // peak over t <= 1, set once that range is done
  bool bad = false;
  // log of F(x e^u) K(e^u) e^u
  auto lv = [&](double u) -> cplx {
    double t = std::exp(u);
    EvalResult k = ke.eval(t);
    ++evals;
    if (k.log_mag == -kInf) return {-kInf, 0.0};
    EvalResult f = rep.eval(x * t, quad.rel_tol);
    if (f.log_mag == -kInf) return {-kInf, 0.0};
    if (!std::isfinite(f.log_mag) || !std::isfinite(k.log_mag)) bad = true;
    node_err = std::max(node_err, std::min(1.0, k.error + f.error));
    cplx l = f.log() + k.log() + u;
    if (l.real() > peak_low + 700.0)
      throw ResumError(ErrorCode::divergent_integrand,
                       "F(xt)K(t) grows past e^700 times its size near t = 1 (t = " + std::to_string(t) + ")");
    return l;
  };

  LogAcc acc;
  // head [0, t_lo]: F roughly F(0) and K roughly a power t^beta there
  {
    double t0 = res.t_lo;
    EvalResult k1 = ke.eval(t0), k2 = ke.eval(2 * t0);
    EvalResult f0 = rep.eval(0.0);
    if (k1.log_mag > -kInf && f0.log_mag > -kInf) {
      double beta = (k2.log_mag - k1.log_mag) / std::log(2.0);
      cplx l = f0.log() + k1.log() + std::log(t0) - std::log(1.0 + std::max(beta, -0.5));
      acc.add(l.real(), std::polar(1.0, l.imag()), 1.0, 0.02 + std::abs(x) * t0);
    }
  }

  const double rel = std::max(quad.rel_tol, 1e-14);
  double peak = -kInf;
  int quiet = 0;
  double u = u_lo, low = -kInf;
  std::map<double, cplx> memo;
  std::function<void(double, double, int)> panel = [&](double a, double b, int depth) {
    // first pass records log values at the Kronrod nodes; the panel is scaled by their maximum
    memo.clear();
    node_err = 0.0;
    double sc = -kInf;
    gk21([&](double uu) {
      cplx l = lv(uu);
      memo[uu] = l;
      if (std::isnan(l.real()) || l.real() == kInf) bad = true;
      sc = std::max(sc, l.real());
      return cplx(0.0);
    }, a, b);
    if (bad) return;
    if (sc == -kInf) return;
    CFun f = [&](double uu) {
      cplx l = memo.at(uu);
      if (l.real() == -kInf) return cplx(0.0);
      return std::exp(l - sc);
    };
    QuadResult q = gk21(f, a, b);
    if (bad || !std::isfinite(std::abs(q.value))) {
      bad = true;
      return;
    }
    // refine only while the panel error matters against everything accumulated so far
    double l_tot = log_add(acc.scale == -kInf ? -kInf : acc.scale + std::log(acc.l1), sc + std::log(q.l1));
    if (sc + std::log(q.abs_err) > std::log(0.01 * rel) + l_tot && depth < 6) {
      panel(a, 0.5 * (a + b), depth + 1);
      panel(0.5 * (a + b), b, depth + 1);
      return;
    }
    acc.add(sc, q.value, q.l1, q.abs_err + node_err * q.l1);
    double lp = sc + std::log(std::max(q.l1, 1e-300) / (b - a));
    peak = std::max(peak, lp);
  };

  for (double hh = h; u < u_max; u += hh) {
    hh = u < -2.0 ? 4 * h : h;  // the integrand is a plain power law far below t = 1
    double before = peak;
    peak = -kInf;
    panel(u, u + hh, 0);
    double lp = peak;
    peak = std::max(before, lp);
    if (bad) {
      res.evaluations = evals;
      throw ResumError(ErrorCode::divergent_integrand, "F(xt)K(t) not representable at t = " + std::to_string(std::exp(u)));
    }
    if (u + hh <= 0.0) low = std::max(low, lp);
    if (u + hh >= 0.0 && peak_low == kInf) peak_low = low;
    if (u + hh > 0.0 && (lp == -kInf || lp < peak - 40.0)) {
      if (++quiet >= 3) {
        u += hh;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  if (u >= u_max) throw ResumError(ErrorCode::divergent_integrand, "F(xt)K(t) did not decay by t = 1e6");
  res.t_hi = std::exp(u);
  res.value = acc.value();
  double l1 = acc.abs(acc.l1);
  res.error = acc.abs(acc.err) + std::exp(-40.0) * l1 + 1e-16 * l1;
  res.cancellation = std::abs(res.value) > 0 ? l1 / std::abs(res.value) : kInf;
  res.evaluations = evals;
  return res;
}

SummationResult regular_transform_pm(const EntireRep& rep, const KernelEvaluator& ke, const Contour& contour,
                                     double t, const QuadratureSpec& quad) {
  check_pairing(rep, ke);
  if (contour.role != ContourRole::psi_plus && contour.role != ContourRole::psi_minus)
    throw ResumError(ErrorCode::precondition, "regular_transform_pm needs a psi contour");
  SummationResult res;
  res.kernel_cache_id = ke.cache_id();
  LogAcc acc, diff;
  double peak = -kInf;
  int quiet = 0, evals = 0;
  size_t i = 0;
  const bool embedded = contour.coarse.size() == contour.nodes.size();
  for (; i < contour.nodes.size(); ++i) {
    cplx z = contour.nodes[i];
    // K(0) as the limit along the positive ray
    EvalResult k = z == cplx(0.0) ? ke.eval(1e-12) : ke.eval(z);
    ++evals;
    if (k.log_mag == -kInf) continue;
    EvalResult f = rep.eval(t * z, quad.rel_tol);
    if (f.log_mag == -kInf) continue;
    cplx l = f.log() + k.log() + safe_log(contour.weights[i]);
    if (!std::isfinite(l.real()))
      throw ResumError(ErrorCode::divergent_integrand, "F(tz)K(z) not representable on the contour");
    double e = std::min(1.0, f.error + k.error);
    acc.add(l.real(), std::polar(1.0, l.imag()), 1.0, e);
    // fine minus embedded coarse rule
    if (embedded) {
      cplx dw = contour.weights[i] - contour.coarse[i];
      if (dw != cplx(0.0)) {
        cplx ld = f.log() + k.log() + safe_log(dw);
        diff.add(ld.real(), std::polar(1.0, ld.imag()), 1.0, 0.0);
      }
    }
    peak = std::max(peak, l.real());
    if (contour.segment[i] > 0 && l.real() < peak - 40.0) {
      if (++quiet >= 5) break;
    } else {
      quiet = 0;
    }
  }
  if (quiet < 5) res.note = "contour ended before the integrand decayed";
  res.t_hi = std::abs(contour.nodes[std::min(i, contour.nodes.size() - 1)]);
  res.value = acc.value();
  double l1 = acc.abs(acc.l1);
  res.error = acc.abs(acc.err) + 1e-16 * l1 + (quiet < 5 ? std::exp(peak) : std::exp(peak - 40.0));
  if (embedded) res.error += std::abs(diff.value());
  res.cancellation = std::abs(res.value) > 0 ? l1 / std::abs(res.value) : kInf;
  res.evaluations = evals;
  return res;
}

SummationResult moment_sum(const Jet& jet, const KernelEvaluator& ke, const QuadratureSpec& quad) {
  bool zero = !jet.tail || jet.tail->c == cplx(0.0);
  for (cplx l : jet.log_a) zero = zero && l.real() == -kInf;
  if (zero) {
    SummationResult r;
    r.value = 0.0;
    r.error = 0.0;
    r.kernel_cache_id = ke.cache_id();
    r.note = "zero jet";
    return r;
  }
  return regular_transform(singular_transform(jet, ke.mellin_weight()), ke, 1.0, quad);
}

std::string jet_to_json(const Jet& j) {
  nlohmann::json o;
  o["provenance"] = to_string(j.provenance);
  auto& c = o["coeffs"] = nlohmann::json::array();
  for (cplx l : j.log_a) {
    nlohmann::json e;
    if (l.real() == -kInf)
      e["log_mag"] = nullptr;
    else
      e["log_mag"] = l.real();
    e["phase"] = l.imag();
    c.push_back(e);
  }
  if (j.tail) o["tail"] = {{"c", {j.tail->c.real(), j.tail->c.imag()}}, {"q", {j.tail->q.real(), j.tail->q.imag()}}};
  return o.dump(2);
}

Jet jet_from_json(const std::string& s) {
  nlohmann::json o;
  try {
    o = nlohmann::json::parse(s);
  } catch (const std::exception& e) {
    throw ResumError(ErrorCode::config, std::string("jet JSON: ") + e.what());
  }
  Jet j;
  try {
    std::string p = o.value("provenance", "synthetic");
    j.provenance = p == "sampled" ? Provenance::sampled : p == "analytic" ? Provenance::analytic : Provenance::synthetic;
    const auto& c = o.at("coeffs");
    if (!c.is_array()) throw ResumError(ErrorCode::config, "jet JSON: coeffs must be an array");
    // entries are {"log_mag", "phase"} objects, plain numbers, or [re, im] pairs
    for (auto& e : c) {
      if (e.is_number()) {
        j.log_a.push_back(LogValue::from(e.get<double>()).log());
      } else if (e.is_array()) {
        j.log_a.push_back(LogValue::from({e.at(0).get<double>(), e.at(1).get<double>()}).log());
      } else {
        double lm = e.at("log_mag").is_null() ? -kInf : e.at("log_mag").get<double>();
        j.log_a.emplace_back(lm, e.value("phase", 0.0));
      }
    }
    if (o.contains("tail")) {
      auto& t = o.at("tail");
      j.tail = Jet::Geometric{{t.at("c").at(0).get<double>(), t.at("c").at(1).get<double>()},
                              {t.at("q").at(0).get<double>(), t.at("q").at(1).get<double>()}};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ResumError(ErrorCode::config, std::string("jet JSON: ") + e.what());
  }
  if (j.log_a.empty()) throw ResumError(ErrorCode::config, "jet JSON: no coefficients");
  return j;
}

std::string summation_to_json(const SummationResult& r) {
  nlohmann::json o;
  o["value"] = {r.value.real(), r.value.imag()};
  o["error"] = r.error;
  o["trace"] = {{"t_lo", r.t_lo},
                {"t_hi", r.t_hi},
                {"kernel_cache_id", r.kernel_cache_id},
                {"cancellation", r.cancellation},
                {"evaluations", r.evaluations},
                {"note", r.note}};
  return o.dump(2);
}

}  // namespace resum
