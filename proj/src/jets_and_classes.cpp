#include "resum/jets_and_classes.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include <json.hpp>

#include "resum/special_functions.hpp"

namespace resum {

namespace {

double lambda_of(const Weight& w, double n) { return n <= 0.0 ? 0.0 : legendre_lambda(w, n).value; }

// least-squares slope of y against x
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

const char* to_string(ClassTag t) {
  switch (t) {
    case ClassTag::F0: return "F0";
    case ClassTag::A_interval: return "A_interval";
    case ClassTag::A_omega: return "A_omega";
    case ClassTag::A_plus: return "A_plus";
    case ClassTag::A_minus: return "A_minus";
    case ClassTag::A_omega_star: return "A_omega_star";
  }
  return "?";
}

double ChebyshevExpansion::operator()(double x) const {
  double y = chi(x), b1 = 0.0, b2 = 0.0;
  for (size_t k = c.size(); k-- > 1;) {
    double t = 2.0 * y * b1 - b2 + c[k];
    b2 = b1, b1 = t;
  }
  return y * b1 - b2 + (c.empty() ? 0.0 : c[0]);
}

Jet ChebyshevExpansion::to_jet() const {
  // monomial form in y, then y = alpha x + beta
  size_t n = c.size();
  std::vector<long double> p(n, 0.0L), t0(n, 0.0L), t1(n, 0.0L);
  if (n > 0) t0[0] = 1.0L, p[0] = c[0];
  if (n > 1) t1[1] = 1.0L;
  for (size_t k = 1; k < n; ++k) {
    for (size_t j = 0; j <= k; ++j) p[j] += static_cast<long double>(c[k]) * t1[j];
    if (k + 1 == n) break;
    std::vector<long double> t2(n, 0.0L);
    for (size_t j = 0; j <= k; ++j) t2[j + 1] += 2.0L * t1[j];
    for (size_t j = 0; j < n; ++j) t2[j] -= t0[j];
    t0.swap(t1);
    t1.swap(t2);
  }
  long double alpha = 2.0L / (static_cast<long double>(b) - a), beta = -(static_cast<long double>(a) + b) / (b - a);
  std::vector<long double> q(n, 0.0L);
  for (size_t k = n; k-- > 0;) {
    // q = q (alpha x + beta) + p_k
    std::vector<long double> r(n, 0.0L);
    for (size_t j = 0; j < n; ++j) {
      if (q[j] == 0.0L) continue;
      r[j] += beta * q[j];
      if (j + 1 < n) r[j + 1] += alpha * q[j];
    }
    r[0] += p[k];
    q.swap(r);
  }
  std::vector<cplx> a(q.begin(), q.end());
  return Jet::from_values(a, Provenance::sampled);
}

ChebyshevExpansion chebyshev_expand(const std::function<long double(long double)>& f, double a, double b, int n_max,
                                    std::string source) {
  if (n_max < 1) throw ResumError(ErrorCode::precondition, "chebyshev_expand needs n_max >= 1");
  if (!(b > a)) throw ResumError(ErrorCode::precondition, "chebyshev_expand needs a < b");
  const int N = n_max;
  const long double pi = 3.141592653589793238462643383279502884L;
  std::vector<long double> v(N + 1);
  for (int j = 0; j <= N; ++j) {
    long double y = std::cos(pi * j / N);
    v[j] = f(a + 0.5L * (static_cast<long double>(b) - a) * (y + 1.0L));
  }
  ChebyshevExpansion ce;
  ce.a = a, ce.b = b, ce.source = std::move(source);
  ce.c.resize(N + 1);
  for (int k = 0; k <= N; ++k) {
    long double s = 0.0L;
    for (int j = 0; j <= N; ++j) {
      // reduce k j mod 2N so the cosine argument stays in [0, 2 pi)
      long double w = (j == 0 || j == N) ? 0.5L : 1.0L;
      s += w * v[j] * std::cos(pi * ((static_cast<long>(k) * j) % (2 * N)) / N);
    }
    s *= 2.0L / N;
    if (k == 0 || k == N) s *= 0.5L;
    ce.c[k] = static_cast<double>(s);
  }
  return ce;
}

DecayReport coeff_decay_report(const ChebyshevExpansion& ce, const Weight& w) {
  if (ce.c.size() < 8) throw ResumError(ErrorCode::insufficient_data, "fewer than 8 Chebyshev coefficients");
  DecayReport r;
  double top = 0.0;
  for (double c : ce.c) top = std::max(top, std::abs(c));
  // sums below this are rounding of the samples, not coefficients
  const double floor = 1e-18 * std::max(top, 1e-300);
  std::vector<int> idx;
  for (size_t n = 1; n < ce.c.size(); ++n)
    if (std::abs(ce.c[n]) > floor) idx.push_back(static_cast<int>(n));
  r.nonzero = static_cast<int>(idx.size()) + (std::abs(ce.c[0]) > floor ? 1 : 0);
  r.finite_support = idx.size() < 8;
  const int N = static_cast<int>(ce.c.size()) - 1;
  std::vector<double> lam(N + 1, 0.0);
  for (int n : idx) lam[n] = lambda_of(w, n);
  for (double delta : {1.0, 0.5, 0.25}) {
    DecayFit f;
    f.delta = delta;
    for (int n : idx) {
      double v = std::abs(ce.c[n]) * std::exp(lam[n] / delta);
      (2 * n <= N ? f.C : f.validation) = std::max(2 * n <= N ? f.C : f.validation, v);
    }
    if (r.finite_support) f.C = std::max(f.C, f.validation);
    f.stable = r.finite_support || f.validation <= 1.1 * f.C;
    r.lambda_fits.push_back(f);
  }
  if (idx.size() >= 2) {
    std::vector<double> x, y;
    for (int n : idx) x.push_back(n), y.push_back(std::log(std::abs(ce.c[n])));
    r.geometric_rate = -ls_slope(x, y);
    for (int n : idx) r.geometric_C = std::max(r.geometric_C, std::abs(ce.c[n]) * std::exp(r.geometric_rate * n));
  }
  return r;
}

MembershipDiagnostic membership_F0(const Jet& jet, const Weight& w) {
  if (jet.N() < 16) throw ResumError(ErrorCode::precondition, "membership_F0 needs N >= 16");
  MembershipDiagnostic d;
  d.tag = ClassTag::F0;
  const int N = jet.N(), m = N / 2, q = (3 * N) / 4;
  // sigma_n = log|a_n| - n log L(n) = n s_n; s_n -> -inf once the slope of sigma keeps falling, even
  // when it is still positive at N (q^n with q > L(N))
  std::vector<double> xl, yl, xu, yu;
  double score = -kInf;
  for (int n = std::max(1, m); n <= N; ++n) {
    double la = jet.log_a[n].real();
    if (la == -kInf) continue;
    double lL = w.log_L(static_cast<double>(n));
    score = std::max(score, la / n - lL);
    d.samples.push_back({cplx(n), la / n, lL});
    (n <= q ? xl : xu).push_back(n);
    (n <= q ? yl : yu).push_back(la - n * lL);
  }
  if (d.samples.empty()) {
    d.member = true;
    d.score = d.raw_score = -kInf;
    d.note = "zero sequence";
    return d;
  }
  d.raw_score = d.score = score;
  if (xl.size() < 2 || xu.size() < 2) {
    d.note = "too few nonzero coefficients in the top half";
    return d;
  }
  double dl = ls_slope(xl, yl), du = ls_slope(xu, yu);
  d.constants = {{"sigma_slope_lower", dl}, {"sigma_slope_upper", du}};
  d.member = du < dl - 0.02;
  return d;
}

StarDomain StarDomain::disk(double radius) {
  if (!(radius > 0.0)) throw ResumError(ErrorCode::precondition, "disk radius must be positive");
  StarDomain s;
  s.radius_ = radius;
  return s;
}

StarDomain StarDomain::polygon(std::vector<cplx> v) {
  if (v.size() < 3) throw ResumError(ErrorCode::precondition, "polygon needs 3 vertices");
  double turn = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    cplx p = v[i], q = v[(i + 1) % v.size()];
    // every edge seen counterclockwise from 0: each ray meets the boundary once
    if (!((std::conj(p) * q).imag() > 0.0))
      throw ResumError(ErrorCode::precondition, "polygon is not star-shaped about 0 (counterclockwise)");
    turn += std::arg(q / p);
  }
  if (std::abs(turn - 2 * kPi) > 1e-9) throw ResumError(ErrorCode::precondition, "polygon winds around 0 more than once");
  StarDomain s;
  s.vertices_ = std::move(v);
  return s;
}

double StarDomain::boundary_radius(double theta) const {
  if (is_disk()) return radius_;
  cplx d = std::polar(1.0, theta);
  double best = kInf;
  for (size_t i = 0; i < vertices_.size(); ++i) {
    cplx p = vertices_[i], e = vertices_[(i + 1) % vertices_.size()] - p;
    // p + s e = t d
    double den = (std::conj(e) * d).imag();
    if (den == 0.0) continue;
    double t = (std::conj(e) * p).imag() / den;
    double s = (std::conj(d) * p).imag() / (-(std::conj(d) * e).imag());
    if (t > 0.0 && s >= -1e-12 && s <= 1.0 + 1e-12) best = std::min(best, t);
  }
  return best;
}

double StarDomain::minkowski(cplx w) const {
  if (w == cplx(0.0)) return 0.0;
  return std::abs(w) / boundary_radius(std::arg(w));
}

namespace {

struct Majorants {
  SeriesEvaluator e, et;
  explicit Majorants(const Weight& w) : e(w, SeriesKind::E), et(w, SeriesKind::Etilde) {}
  double logE(double x) const { return eval_series_function(e, std::max(x, 0.0)).log_mag; }
  double logEt(double x) const { return eval_series_function(et, std::max(x, 0.0)).log_mag; }
};

double c_eff(double c, double u_max) {
  // an infinite endpoint admits any c; a large one stands in for all of them
  return std::isfinite(c) ? 0.9 * c : std::copysign(100.0 * u_max, c);
}

}  // namespace

namespace {

MembershipDiagnostic diagnose(const std::function<EvalResult(cplx)>& F, const Weight& w, int degree, ClassTag tag,
                              const GrowthRegion& region, int budget) {
  if (tag == ClassTag::F0) throw ResumError(ErrorCode::precondition, "F0 is a coefficient class; use membership_F0");
  if (!(region.c_minus < 0.0 && region.c_plus > 0.0))
    throw ResumError(ErrorCode::precondition, "interval must contain 0");
  if (region.poly_mode && degree < 0) throw ResumError(ErrorCode::precondition, "poly mode needs a polynomial rep");
  Weight mw = region.majorant.valid() ? region.majorant : w;
  Majorants mj(mw);
  const double um = region.u_max;
  const double cp = c_eff(region.c_plus, um), cm = c_eff(region.c_minus, um);
  MembershipDiagnostic d;
  d.tag = tag;
  budget = std::max(budget, 50);

  // sample points and the scale used to split them into fit / validation halves
  std::vector<std::pair<cplx, double>> pts;
  if (tag == ClassTag::A_interval) {
    int nv = 5, nu = std::max(10, budget / nv);
    for (int i = 0; i < nu; ++i) {
      double u = -um + 2.0 * um * i / (nu - 1);
      for (int j = 0; j < nv; ++j) pts.push_back({cplx(u, -region.Y + 2.0 * region.Y * j / (nv - 1)), std::abs(u)});
    }
  } else if (tag == ClassTag::A_omega) {
    int n = static_cast<int>(std::ceil(std::sqrt(budget)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cplx z(-um + 2.0 * um * i / (n - 1), -um + 2.0 * um * j / (n - 1));
        pts.push_back({z, std::abs(z)});
      }
  } else {
    // polar grids: upper half-plane for A+, lower for A-, the full disk for the star class
    int nr = std::max(5, budget / 10), na = std::max(10, budget / nr);
    for (int i = 1; i <= nr; ++i) {
      double r = um * i / nr;
      for (int j = 0; j < na; ++j) {
        double psi = tag == ClassTag::A_omega_star ? -kPi + 2 * kPi * (j + 0.5) / na : kPi * (j + 0.5) / na;
        cplx z = std::polar(r, tag == ClassTag::A_minus ? -psi : psi);
        pts.push_back({z, r});
      }
    }
  }

  // log|F| once per point
  std::vector<Sample> base;
  std::vector<double> scale;
  for (auto& [z, sc] : pts) {
    try {
      EvalResult f = F(z);
      if (!std::isfinite(f.log_mag) && f.log_mag != -kInf) throw ResumError(ErrorCode::quadrature, "F not finite");
      if (f.error > 1e-3) {
        d.clipped = true;
        continue;
      }
      base.push_back({z, f.log_mag, 0.0});
      scale.push_back(sc);
    } catch (const ResumError&) {
      d.clipped = true;
    }
  }
  if (base.empty()) throw ResumError(ErrorCode::precondition, "no usable samples in the region");

  auto evaluate = [&](const std::function<double(cplx)>& maj, std::vector<Sample>& out) {
    out = base;
    double fit = -kInf, val = -kInf, raw = -kInf;
    for (size_t i = 0; i < out.size(); ++i) {
      out[i].log_majorant = maj(out[i].z);
      double ex = out[i].log_F - out[i].log_majorant;
      raw = std::max(raw, ex);
      (scale[i] <= 0.5 * um ? fit : val) = std::max(scale[i] <= 0.5 * um ? fit : val, ex);
    }
    return std::array<double, 3>{fit, val, raw};
  };

  auto side_c = [&](double u) { return u >= 0.0 ? cp : cm; };
  std::function<double(cplx)> best;
  std::array<double, 3> res{};
  std::vector<Sample> samples;
  auto consider = [&](const std::function<double(cplx)>& maj, std::vector<std::pair<std::string, double>> consts) {
    std::vector<Sample> s;
    auto r = evaluate(maj, s);
    if (samples.empty() || r[1] - r[0] < res[1] - res[0]) {
      res = r, samples = std::move(s), d.constants = std::move(consts);
    }
  };

  if (tag == ClassTag::A_interval && region.poly_mode) {
    double lam = lambda_of(w, degree);
    double dl = region.poly_delta;
    std::vector<Sample> s;
    auto r = evaluate([&](cplx z) { return mj.logE(z.real() / side_c(z.real())) + mj.logEt(dl * std::abs(z.real())); }, s);
    double C = lam > 0.0 ? r[2] / lam : (r[2] <= 0.0 ? 0.0 : kInf);
    d.samples = std::move(s);
    d.constants = {{"c_plus", cp}, {"c_minus", cm}, {"delta", dl}, {"Lambda_n", lam}, {"C", C}};
    d.score = C;
    d.raw_score = r[2];
    d.member = C <= 10.0;
    d.note = "poly mode: log|S_L P| <= C Lambda_L(n) + log E(u/c) + log Etilde(delta |u|)";
    return d;
  }

  const std::vector<double> deltas{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  switch (tag) {
    case ClassTag::A_interval:
      consider([&](cplx z) { return mj.logE(z.real() / side_c(z.real())); }, {{"c_plus", cp}, {"c_minus", cm}, {"Y", region.Y}});
      break;
    case ClassTag::A_omega:
      for (double D : deltas)
        consider([&, D](cplx z) { return mj.logE(z.real() / side_c(z.real()) + D * std::abs(z.imag())); },
                 {{"c_plus", cp}, {"c_minus", cm}, {"Delta", D}});
      break;
    case ClassTag::A_omega_star: {
      const double dl = 0.05;
      consider([&](cplx z) { return mj.logE(region.omega.minkowski(z) + dl * std::abs(z)); }, {{"delta", dl}});
      break;
    }
    case ClassTag::A_plus:
    case ClassTag::A_minus: {
      HProfile hp(mw);
      for (double B : {0.5, 1.0, 2.0})
        for (double D : deltas)
          consider(
              [&, B, D](cplx z) {
                double r = std::abs(z), psi = std::abs(std::arg(z));
                double c = std::abs(psi <= kPi / 2 ? cp : cm);
                double le = mj.logE(r / c + D * r * std::sin(psi));
                double p = std::min(psi + 2 * B / r, kPi - 1e-6);
                double lh = std::exp(hp.loglogH(p));
                return log_add(lh, le);
              },
              {{"c_plus", cp}, {"c_minus", cm}, {"B", B}, {"Delta", D}});
      break;
    }
    case ClassTag::F0: break;
  }
  d.samples = std::move(samples);
  d.raw_score = res[2];
  d.score = res[1] - res[0];
  d.member = d.score <= std::log(1.1);
  d.constants.emplace_back("fitted_log_constant", res[0]);
  return d;
}

}  // namespace

MembershipDiagnostic growth_diagnostic(const EntireRep& rep, ClassTag tag, const GrowthRegion& region, int budget) {
  if (tag == ClassTag::F0) return membership_F0(inverse_singular(rep), rep.w);
  int degree = -1;
  if (!rep.tail || rep.tail->c == cplx(0.0)) {
    degree = 0;
    for (size_t n = 0; n < rep.log_b.size(); ++n)
      if (rep.log_b[n].real() > -kInf) degree = static_cast<int>(n);
  }
  return diagnose([&](cplx z) { return rep.eval(z); }, rep.w, degree, tag, region, budget);
}

MembershipDiagnostic growth_diagnostic(const std::function<EvalResult(cplx)>& F, const Weight& w, ClassTag tag,
                                       const GrowthRegion& region, int budget) {
  return diagnose(F, w, -1, tag, region, budget);
}

std::string diagnostic_to_json(const MembershipDiagnostic& d) {
  nlohmann::json o;
  o["class"] = to_string(d.tag);
  o["score"] = d.score;
  o["raw_score"] = d.raw_score;
  o["member"] = d.member;
  o["clipped"] = d.clipped;
  o["note"] = d.note;
  auto& c = o["constants"] = nlohmann::json::object();
  for (auto& [k, v] : d.constants) c[k] = v;
  o["samples"] = d.samples.size();
  return o.dump(2);
}


namespace {

// rho L'(rho) = eps L on the ray, through ell so huge rho stay representable
double rho_Lprime(const Weight& w, double t) { return w.ell_prime(t) * std::exp(w.ell(t)); }

}  // namespace

LacunaryJet lacunary_counterexample_jet(const Weight& w, const Weight& L2, int k_terms, int jet_order) {
  const std::vector<double> ts{7.0, 70.0, 700.0};
  // rho L' -> inf, seen as a clear increase over the representable range
  std::vector<double> rl;
  for (double t : ts) rl.push_back(rho_Lprime(w, t));
  if (!(rl[1] > rl[0] && rl[2] > rl[1] && rl[2] > 2.0 * rl[0]))
    throw ResumError(ErrorCode::precondition, "lacunary construction needs rho L'(rho) -> infinity (got " +
                                                  std::to_string(rl[0]) + " .. " + std::to_string(rl[2]) + ")");
  // 1/eps = o(L2)
  auto q = [&](double t) { return 1.0 / (w.ell_prime(t) * std::exp(L2.ell(t))); };
  if (!(q(700.0) < 0.5 * q(7.0) && q(70.0) < q(7.0)))
    throw ResumError(ErrorCode::precondition, "lacunary construction needs 1/eps = o(L2)");
  LacunaryJet out;
  if (k_terms <= 0) return out;

  // L3: geometric mean of 1/eps and min(L, L2), in terms of t = log n
  auto r_of = [&](double t) { return std::sqrt(std::min(std::exp(w.ell(t)), std::exp(L2.ell(t))) / w.ell_prime(t)); };
  // Lambda_L(n r) eps(n r) at log(n r)
  auto lam_eps = [&](double log_nr) { return legendre_lambda_log(w, log_nr).value * w.ell_prime(log_nr); };
  SeriesEvaluator e1(w, SeriesKind::E1);
  auto log_E1 = [&](double log_n, double r) {
    return eval_series_function(e1, cplx(0.0, std::exp(log_n) * r), 1e-10).log_mag;
  };

  const double t0 = std::log(128.0), t_cap = 650.0;
  // delta and A from the measured size of log|E1(i n r_n)| against Lambda(n r_n) eps(n r_n)
  double lo = kInf, hi = 0.0;
  for (double t : {t0, 10.0, 20.0, 50.0, 100.0, 200.0, 400.0, t_cap}) {
    double r = r_of(t);
    double ratio = log_E1(t, r) / lam_eps(t + std::log(r));
    lo = std::min(lo, ratio), hi = std::max(hi, ratio);
  }
  out.delta = 0.5 * lo;
  out.A = hi;

  std::vector<double> tk{t0};
  while (static_cast<int>(tk.size()) < k_terms) {
    double tp = tk.back(), rp = r_of(tp);
    int k = static_cast<int>(tk.size());
    double tm = tp;
    bool ok = false;
    while (!ok) {
      tm += std::log(2.0);
      if (tm > t_cap) break;
      double rm = r_of(tm);
      double main = lam_eps(tm + std::log(rm));
      bool first = 1.1 * out.A * lam_eps(tm + std::log(rp)) <= 0.5 * main;
      bool second = 1.1 * out.A * lam_eps(tp + std::log(rm)) <= out.delta * main - std::log(2.0 * k);
      ok = first && second;
    }
    if (!ok) {
      std::string msg = "sparsity selection ran past n = e^" + std::to_string(t_cap) + " after " +
                        std::to_string(tk.size()) + " indices; partial log n_k:";
      for (double t : tk) msg += " " + std::to_string(t);
      throw ResumError(ErrorCode::construction_incomplete, msg);
    }
    tk.push_back(tm);
  }

  for (double t : tk) {
    double r = r_of(t);
    double omega_lam = out.delta * lam_eps(t + std::log(r));  // omega_n Lambda_L(n)
    out.log_n.push_back(t);
    out.log_coef.push_back(-omega_lam);
  }
  // certificate at r_{n_k}: the k-th term against the sum of the others
  for (size_t k = 0; k < tk.size(); ++k) {
    double r = r_of(tk[k]);
    double main = out.log_coef[k] + log_E1(tk[k], r), rest = -kInf;
    for (size_t j = 0; j < tk.size(); ++j)
      if (j != k) rest = log_add(rest, out.log_coef[j] + log_E1(tk[j], r));
    LacunaryCertificate c;
    c.log_n = tk[k];
    c.r = r;
    c.log_F_lower = rest < main ? main + std::log1p(-std::exp(rest - main)) : -kInf;
    c.log_E2 = inverse_L(L2, r);
    out.certificate.push_back(c);
  }

  // Taylor coefficients of sum_k c_k e^{i n_k x}: i^j sum_k c_k n_k^j / j!
  out.jet.provenance = Provenance::synthetic;
  for (int j = 0; j <= jet_order; ++j) {
    double s = -kInf;
    for (size_t k = 0; k < tk.size(); ++k) s = log_add(s, out.log_coef[k] + j * tk[k]);
    out.jet.log_a.emplace_back(s - std::lgamma(j + 1.0), std::remainder(0.5 * kPi * j, 2 * kPi));
  }
  return out;
}

}  // namespace resum
