#include "resum/special_functions.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>

#include "resum/saddle.hpp"

namespace resum {

const char* to_string(EvalMethod m) {
  switch (m) {
    case EvalMethod::series: return "series";
    case EvalMethod::asymptotic: return "asymptotic";
    case EvalMethod::quadrature: return "quadrature";
    case EvalMethod::cache: return "cache";
  }
  return "?";
}

const char* to_string(SeriesKind k) {
  switch (k) {
    case SeriesKind::E: return "E";
    case SeriesKind::E1: return "E1";
    case SeriesKind::Etilde: return "Etilde";
    case SeriesKind::Estar: return "Estar";
  }
  return "?";
}

namespace {

constexpr double kOmegaDelta = 0.25;  // Omega(pi/2 + delta)
constexpr double kMachEps = 2.220446049250313e-16;

// G = log Gamma + log gamma
class E1Impl final : public WeightImpl {
 public:
  explicit E1Impl(Weight w) : w_(std::move(w)) {}
  cplx log_gamma(cplx s) const override { return lgamma_c(s) + w_.impl().log_gamma(s); }
  cplx log_L(cplx s) const override { return log_gamma(s) / s; }
  cplx dlog_gamma(cplx s) const override { return digamma_c(s) + w_.impl().dlog_gamma(s); }
  cplx d2log_gamma(cplx s) const override { return trigamma_c(s) + w_.impl().d2log_gamma(s); }
  double log_gamma_real(double rho) const override { return std::lgamma(rho) + w_.impl().log_gamma_real(rho); }
  double log_L_real(double rho) const override { return log_gamma_real(rho) / rho; }
  std::string canonical() const override { return "E1(" + w_.canonical() + ")"; }

 private:
  Weight w_;
};

// G = -s log eps(s), eps clamped below at 1e-300
class EtildeImpl final : public WeightImpl {
 public:
  explicit EtildeImpl(Weight w) : w_(std::move(w)) {}
  cplx log_L(cplx s) const override {
    cplx e = w_.impl().epsilon(s);
    if (std::abs(e) < 1e-300) return -std::log(1e-300);
    return -std::log(e);
  }
  double log_L_real(double rho) const override { return -std::log(std::max(w_.impl().eps_real(rho), 1e-300)); }
  double log_gamma_real(double rho) const override { return rho * log_L_real(rho); }
  std::string canonical() const override { return "Etilde(" + w_.canonical() + ")"; }

 private:
  Weight w_;
};

struct Neumaier {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
  void scale(double f) {
    s *= f;
    c *= f;
  }
};

// relative size of the first correction to a Laplace-type saddle approximation
double saddle_correction(const WeightImpl& g, cplx s) {
  cplx g2 = g.d2log_gamma(s);
  double h = 1e-3 * std::abs(s);
  cplx g3 = (g.d2log_gamma(s + h) - g.d2log_gamma(s - h)) / (2 * h);
  double c = std::norm(g3) / std::pow(std::abs(g2), 3);
  return std::isfinite(c) ? std::min(c, 1.0) : 1.0;
}

// complex saddle of G'(s) = log z started from the real saddle of |z|
std::optional<SaddlePoint> generic_saddle(const WeightImpl& g, cplx lz, double max_arg) {
  auto r0 = real_saddle(g, lz.real());
  if (!r0) return std::nullopt;
  double d2 = g.d2log_gamma(cplx(*r0)).real();
  double th0 = (d2 > 0.0) ? lz.imag() / (*r0 * d2) : 0.0;
  th0 = std::clamp(th0, -0.9 * max_arg, 0.9 * max_arg);
  auto sp = find_saddle(g, lz, std::polar(*r0, th0), 1e-12, max_arg);
  if (!sp) sp = find_saddle(g, lz, std::polar(*r0, 0.5 * th0), 1e-12, max_arg);
  if (sp && lz.imag() == 0.0) sp->s = sp->s.real();
  return sp;
}

// an exponent of size |v| is only known to |v| ulps
double with_floor(double err, cplx v) { return std::min(1.0, std::max(err, kMachEps * (1.0 + std::abs(v.real())))); }

EvalResult bounded_branch(cplx z) {
  // zE(z) stays bounded off Omega; report the leading residue size -c/z
  EvalResult r;
  r.log_mag = -std::log(std::abs(z));
  r.phase = std::arg(-1.0 / z);
  r.error = 1.0;
  r.method = EvalMethod::asymptotic;
  r.flagged = true;
  return r;
}

}  // namespace

SeriesEvaluator::SeriesEvaluator(const Weight& w, SeriesKind kind, long max_terms)
    : w_(w), kind_(kind), max_terms_(max_terms) {
  switch (kind) {
    case SeriesKind::E: {
      auto m = std::make_shared<Weight>(w);
      g_ = std::shared_ptr<const WeightImpl>(m, &m->impl());
      break;
    }
    case SeriesKind::E1: g_ = std::make_shared<E1Impl>(w); break;
    case SeriesKind::Etilde: g_ = std::make_shared<EtildeImpl>(w); break;
    case SeriesKind::Estar: {
      auto m = std::make_shared<Weight>(derive_weight(w, Derivation::ratio));
      g_ = std::shared_ptr<const WeightImpl>(m, &m->impl());
      break;
    }
  }
}

double SeriesEvaluator::log_coeff(long n) const { return -g_->log_gamma_real(n + 1.0); }

std::optional<EvalResult> SeriesEvaluator::series(cplx z, double tol) const {
  if (z == cplx(0.0)) {
    EvalResult r;
    r.log_mag = log_coeff(0);
    r.error = kMachEps;
    return r;
  }
  const double lr = std::log(std::abs(z)), th = std::arg(z);
  double n_peak = 0.0;
  if (auto rs = real_saddle(*g_, lr)) n_peak = std::max(0.0, *rs - 1.0);
  if (n_peak > 0.9 * max_terms_) return std::nullopt;
  long np = static_cast<long>(n_peak);
  double ref = std::max({log_coeff(0), np * lr + log_coeff(np), (np + 1) * lr + log_coeff(np + 1)});
  if (std::abs(th) > kPi / 4 && ref > 15.0) return std::nullopt;

  Neumaier sr, si;
  double abs_sum = 0.0, round = 0.0, prev = kInf, last = 0.0;
  int dec = 0;
  long n = 0;
  bool done = false;
  for (; n <= max_terms_; ++n) {
    double lc = log_coeff(n);
    if (lc == -kInf) continue;
    double lm = lc + n * lr - ref;
    if (lm > 30.0) {
      double f = std::exp(-lm);
      sr.scale(f), si.scale(f);
      abs_sum *= f, round *= f, prev *= f;
      ref += lm;
      lm = 0.0;
    }
    double mag = std::exp(lm);
    double ph = n * th;
    sr.add(mag * std::cos(ph));
    si.add(mag * std::sin(ph));
    abs_sum += mag;
    round += mag * kMachEps * (std::abs(lc) + n * std::abs(lr) + std::abs(ref) + std::abs(ph) + 1.0);
    if (n > n_peak && mag < prev)
      ++dec;
    else if (n > n_peak)
      dec = 0;
    prev = mag;
    last = mag;
    double S = std::hypot(sr.value(), si.value());
    if (dec >= 5 && (mag < tol * S || mag < 1e-17 * abs_sum)) {
      done = true;
      break;
    }
  }
  if (!done) return std::nullopt;
  cplx S(sr.value(), si.value());
  EvalResult r;
  r.method = EvalMethod::series;
  if (std::abs(S) == 0.0) {
    r.log_mag = -kInf;
    r.error = kInf;
    return r;
  }
  r.log_mag = ref + std::log(std::abs(S));
  r.phase = std::arg(S);
  r.cancellation = abs_sum / std::abs(S);
  r.error = (round + 2 * last + kMachEps * abs_sum * std::sqrt(n + 1.0)) / std::abs(S);
  return r;
}

std::optional<EvalResult> SeriesEvaluator::lindelof(cplx z, double tol) const {
  if (z == cplx(0.0)) return std::nullopt;
  const cplx lw = std::log(-z);
  const double c = -0.5;
  const cplx two_pi_i(0.0, 2 * kPi);
  auto li = [&](double tau) -> cplx {
    cplx s(c, tau);
    cplx ls;
    if (tau >= 0.0)
      ls = std::log(two_pi_i) + cplx(0.0, kPi) * s - std::log(std::exp(cplx(0.0, 2 * kPi) * s) - 1.0);
    else
      ls = std::log(two_pi_i) - cplx(0.0, kPi) * s - std::log(1.0 - std::exp(cplx(0.0, -2 * kPi) * s));
    return ls - g_->log_gamma(s + 1.0) + s * lw;
  };
  double peak = li(0.0).real();
  double cut = std::log(tol) - 8.0;
  auto extent = [&](double sign) -> double {
    double tau = 0.5;
    double lo_run = 0.0;
    while (tau < 2e4) {
      double v = li(sign * tau).real();
      if (!std::isfinite(v)) return kNaN;
      peak = std::max(peak, v);
      if (v < peak + cut) {
        if (++lo_run >= 2) return tau;
      } else {
        lo_run = 0;
      }
      tau *= 1.4;
    }
    return kNaN;
  };
  double tp = extent(1.0), tm = extent(-1.0);
  if (!std::isfinite(tp) || !std::isfinite(tm)) return std::nullopt;
  const double ref = peak;
  CFun f = [&](double tau) { return std::exp(li(tau) - ref); };
  QuadResult a = integrate_adaptive(f, -tm, 0.0, 1e-18, 0.1 * tol, 4000);
  QuadResult b = integrate_adaptive(f, 0.0, tp, 1e-18, 0.1 * tol, 4000);
  cplx I = a.value + b.value;
  double l1 = a.l1 + b.l1;
  if (std::abs(I) == 0.0 || !std::isfinite(std::abs(I))) return std::nullopt;
  // E = -(1/2 pi i) * i * int (...) dtau
  cplx E = -I / (2 * kPi);
  EvalResult r;
  r.method = EvalMethod::quadrature;
  r.log_mag = ref + std::log(std::abs(E));
  r.phase = std::arg(E);
  r.cancellation = l1 / std::abs(I);
  r.error = (a.abs_err + b.abs_err) / std::abs(I) + std::exp(cut) * r.cancellation + 1e-15 * r.cancellation;
  if (!a.converged || !b.converged) r.error = std::max(r.error, 1e-3);
  return r;
}

EvalResult SeriesEvaluator::saddle(cplx z) const {
  if (z == cplx(0.0)) return *series(z, 1e-15);
  cplx lz = std::log(z);
  auto sp = generic_saddle(*g_, lz, std::min(w_.sector_half_angle(), kPi - 0.05));
  if (!sp || std::abs(std::arg(sp->s)) > kPi / 2 + kOmegaDelta) return bounded_branch(z);
  cplx s = sp->s;
  cplx val = 0.5 * std::log(2 * kPi / g_->d2log_gamma(s)) + s * lz - g_->log_gamma(s) - lz;
  EvalResult r = EvalResult::from_log(val, with_floor(saddle_correction(*g_, s), val), EvalMethod::asymptotic);
  if (z.imag() == 0.0 && z.real() > 0.0) r.phase = 0.0;
  return r;
}

EvalResult eval_E_asymptotic(const Weight& w, cplx z) {
  const WeightImpl& g = w.impl();
  cplx lz = std::log(z);
  // outside the image of the sector |arg s| < pi/2 + delta: bounded branch
  auto r0 = real_saddle(g, lz.real());
  if (r0) {
    double edge = kPi / 2 + kOmegaDelta;
    double arg_edge = g.dlog_gamma(std::polar(*r0, edge)).imag();
    if (std::abs(lz.imag()) > std::abs(arg_edge)) return bounded_branch(z);
  } else if (std::abs(lz.imag()) > kPi / 2) {
    return bounded_branch(z);
  }
  SaddlePoint sp = solve_saddle(w, z);
  cplx s = sp.s, e = g.epsilon(s);
  cplx val = 0.5 * std::log(2 * kPi * s / e) + s * e - lz;
  double err = saddle_correction(g, s) + 0.5 * std::abs(1.0 - s * g.d2log_gamma(s) / e);
  EvalResult r = EvalResult::from_log(val, with_floor(err, val), EvalMethod::asymptotic);
  if (z.imag() == 0.0 && z.real() > 0.0) r.phase = 0.0;
  return r;
}

EvalResult eval_series_function(const SeriesEvaluator& se, cplx z, double tol) {
  if (!(tol >= 1e-14)) throw ResumError(ErrorCode::precondition, "tolerance must be >= 1e-14");
  const double accept = std::max(100 * tol, 1e-9);
  std::optional<EvalResult> best;
  auto consider = [&](const std::optional<EvalResult>& r) {
    if (r && (!best || r->error < best->error)) best = r;
    return r && r->error <= accept;
  };
  if (consider(se.series(z, tol))) return *best;
  if (consider(se.lindelof(z, tol))) return *best;
  if (se.kind() == SeriesKind::E) {
    try {
      consider(eval_E_asymptotic(se.weight(), z));
    } catch (const ResumError&) {
    }
  }
  consider(se.saddle(z));
  if (!best) throw ResumError(ErrorCode::truncation_failure, "no evaluation strategy reached the tolerance");
  return *best;
}

// ---------------------------------------------------------------------------------------------
// kernel

KernelEvaluator::KernelEvaluator(const Weight& w, KernelKind kind, QuadratureSpec quad)
    : w_(w), g_(kind == KernelKind::K ? w : derive_weight(w, Derivation::ratio)), kind_(kind), quad_(quad) {}

std::string KernelEvaluator::cache_id() const {
  return std::string(kind_ == KernelKind::K ? "K" : "Kstar") + "|" + w_.canonical() + "|" + quad_.hash();
}

namespace {

struct PathResult {
  cplx sum = 0.0;  // int exp(Phi - ref) ds
  double ref = 0.0, l1 = 0.0, err = 0.0;
  bool ok = false;
};

class KernelPath {
 public:
  KernelPath(const WeightImpl& g, cplx lz, double rel_tol) : g_(g), lz_(lz), tol_(rel_tol) {}

  cplx phi(cplx s) const { return g_.log_gamma(s) - s * lz_; }
  cplx dphi(cplx s) const { return g_.dlog_gamma(s) - lz_; }

  // steepest-descent trace from s0 leaving in direction dir
  std::vector<cplx> trace(cplx s0, cplx dir, double ref) const {
    std::vector<cplx> v{s0};
    double sigma = 1.0 / std::sqrt(std::abs(g_.d2log_gamma(s0)));
    cplx s = s0 + std::min(0.5 * sigma, 0.25 * std::abs(s0)) * dir;
    v.push_back(s);
    for (int k = 0; k < 5000; ++k) {
      double re = phi(s).real();
      if (re < ref - 45.0) return v;
      if (std::abs(std::arg(s)) >= 0.75 * kPi) {
        // continue radially
        double r = std::abs(s), th = std::arg(s);
        for (int j = 0; j < 400; ++j) {
          r *= 1.25;
          cplx p = std::polar(r, th);
          v.push_back(p);
          if (phi(p).real() < ref - 45.0) return v;
        }
        return {};
      }
      cplx d = dphi(s);
      double ad = std::abs(d);
      if (!(ad > 0.0) || !std::isfinite(ad)) return {};
      double h = std::min({1.0 / ad, sigma, 0.25 * std::abs(s)});
      cplx sm = s + 0.5 * h * (-std::conj(d) / ad);
      cplx dm = dphi(sm);
      cplx sn = s + h * (-std::conj(dm) / std::abs(dm));
      // refuse to cross the real axis left of the origin
      if (sn.real() < 0.05 && (sn.imag() > 0) != (s.imag() > 0)) return {};
      if (std::abs(sn) < 1e-8) return {};
      v.push_back(sn);
      s = sn;
    }
    return {};
  }

  // vertical piece from x_a then a ray at angle 3pi/4 (upper half; lower is the conjugate path)
  std::vector<cplx> anchor_upper(double xa, double ref) const {
    std::vector<cplx> v{cplx(xa)};
    double Y = 2.0;
    for (double t = 0.25; t < Y; t = std::min(Y, t * 2.0)) v.emplace_back(xa, t);
    cplx p(xa, Y);
    v.push_back(p);
    cplx dir = std::polar(1.0, 0.75 * kPi);
    double r = 0.5;
    for (int j = 0; j < 400; ++j) {
      cplx q = p + r * dir;
      v.push_back(q);
      if (phi(q).real() < ref - 45.0 && r > 4.0) return v;
      r *= 1.3;
    }
    return {};
  }

  PathResult integrate(const std::vector<cplx>& path, double ref) const {
    PathResult pr;
    pr.ref = ref;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      cplx a = path[i], b = path[i + 1];
      CFun f = [&](double x) {
        cplx s = a + (b - a) * x;
        return std::exp(phi(s) - ref) * (b - a);
      };
      QuadResult q = integrate_adaptive(f, 0.0, 1.0, 1e-17, 0.01 * tol_, 64);
      if (!std::isfinite(std::abs(q.value))) return pr;
      pr.sum += q.value;
      pr.l1 += q.l1;
      pr.err += q.abs_err;
    }
    pr.ok = true;
    return pr;
  }

 private:
  const WeightImpl& g_;
  cplx lz_;
  double tol_;
};

}  // namespace

EvalResult KernelEvaluator::direct(cplx z) const {
  const WeightImpl& g = g_.impl();
  cplx lz = std::log(z);
  KernelPath kp(g, lz, quad_.rel_tol);
  const bool real_t = z.imag() == 0.0 && z.real() > 0.0;
  std::vector<cplx> path;
  double ref = 0.0;
  double max_arg = std::min(g_.sector_half_angle(), kPi - 0.05);
  auto sp = generic_saddle(g, lz, max_arg);
  if (sp && std::abs(sp->s) > 0.25 && (sp->s.real() > 0.05 || (!real_t && std::abs(sp->s) > 1.0)) && std::abs(std::arg(sp->s)) < kPi / 2 + 0.3) {
    cplx s0 = sp->s;
    ref = kp.phi(s0).real();
    cplx d2 = g.d2log_gamma(s0);
    cplx dir = std::polar(1.0, 0.5 * (kPi - std::arg(d2)));
    if (dir.imag() < 0.0) dir = -dir;
    auto up = kp.trace(s0, dir, ref);
    auto dn = real_t ? std::vector<cplx>{} : kp.trace(s0, -dir, ref);
    if (real_t && !up.empty()) {
      dn = up;
      for (auto& s : dn) s = std::conj(s);
    }
    if (!up.empty() && !dn.empty()) {
      path.assign(dn.rbegin(), dn.rend());
      path.insert(path.end(), up.begin() + 1, up.end());
    }
  }
  if (path.empty()) {
    // no usable saddle: anchor on the real axis where Re Phi is smallest
    double xa = 0.25, best = kInf;
    for (double x : {0.05, 0.1, 0.25, 0.5, 1.0}) {
      double v = kp.phi(cplx(x)).real();
      if (v < best) best = v, xa = x;
    }
    ref = best;
    auto up = kp.anchor_upper(xa, ref);
    if (up.empty()) throw ResumError(ErrorCode::quadrature, "kernel contour did not decay");
    std::vector<cplx> dn = up;
    for (auto& s : dn) s = std::conj(s);
    // the conjugate path is only the mirror image for real t; for complex z the decay check still holds
    path.assign(dn.rbegin(), dn.rend());
    path.insert(path.end(), up.begin() + 1, up.end());
  }
  PathResult pr = kp.integrate(path, ref);
  if (!pr.ok) throw ResumError(ErrorCode::quadrature, "kernel integrand not finite along the contour");
  // rescale by the true peak along the path for an honest cancellation figure
  cplx K = pr.sum / cplx(0.0, 2 * kPi);
  EvalResult r;
  r.method = EvalMethod::quadrature;
  if (std::abs(K) == 0.0) {
    r.log_mag = -kInf;
    r.error = kInf;
    return r;
  }
  r.log_mag = ref + std::log(std::abs(K));
  r.phase = std::arg(K);
  if (real_t) r.phase = K.real() >= 0.0 ? 0.0 : kPi;
  r.cancellation = pr.l1 / std::abs(pr.sum);
  r.error = pr.err / std::abs(pr.sum) + (std::exp(-45.0) + 1e-16 * (1.0 + std::abs(ref))) * r.cancellation;
  return r;
}

std::optional<EvalResult> KernelEvaluator::asymptotic(cplx z) const {
  const WeightImpl& g = g_.impl();
  cplx lz = std::log(z);
  auto sp = generic_saddle(g, lz, std::min(g_.sector_half_angle(), kPi - 0.05));
  if (!sp) return std::nullopt;
  cplx s = sp->s, e = g.epsilon(s);
  cplx val = 0.5 * std::log(s / (2 * kPi * e)) - s * e;
  // eps in place of s G''(s) costs a relative 1 - s G''/eps
  double err = saddle_correction(g, s) + 0.5 * std::abs(1.0 - s * g.d2log_gamma(s) / e);
  EvalResult r = EvalResult::from_log(val, with_floor(err, val), EvalMethod::asymptotic);
  if (z.imag() == 0.0 && z.real() > 0.0) r.phase = 0.0;
  return r;
}

std::optional<EvalResult> KernelEvaluator::laplace(cplx z) const {
  const WeightImpl& g = g_.impl();
  cplx lz = std::log(z);
  auto sp = generic_saddle(g, lz, std::min(g_.sector_half_angle(), kPi - 0.05));
  if (!sp) return std::nullopt;
  cplx s = sp->s;
  cplx val = g.log_gamma(s) - s * lz - 0.5 * std::log(2 * kPi * g.d2log_gamma(s));
  EvalResult r = EvalResult::from_log(val, with_floor(saddle_correction(g, s), val), EvalMethod::asymptotic);
  if (z.imag() == 0.0 && z.real() > 0.0) r.phase = 0.0;
  return r;
}

EvalResult KernelEvaluator::eval(double t) const {
  if (!(t > 0.0)) throw ResumError(ErrorCode::domain, "kernel needs t > 0");
  {
    std::shared_lock lk(mu_);
    auto it = cache_.lower_bound(t * (1 - 1e-14));
    if (it != cache_.end() && it->first <= t * (1 + 1e-14)) {
      EvalResult r;
      r.log_mag = it->second.log_abs;
      r.phase = it->second.sign < 0 ? kPi : 0.0;
      r.error = it->second.error;
      r.method = EvalMethod::cache;
      return r;
    }
  }
  // the asymptotic takes over once it beats the requested tolerance, or once the exponent is so
  // large that differences of Phi along the contour lose more digits than the asymptotic's error
  auto a = laplace(cplx(t));
  EvalResult r;
  if (a && (t > t_asym_ || a->error <= std::max(quad_.rel_tol, 1e-15 * std::abs(a->log_mag)))) {
    r = *a;
  } else if (!a && t > 1.0 && g_.impl().dlog_gamma(cplx(std::exp(690.0))).real() < std::log(t)) {
    // saddle beyond double range: K(t) underflows any log-representable scale
    r.log_mag = -kInf;
    r.error = 0.0;
    r.method = EvalMethod::asymptotic;
    r.flagged = true;
  } else {
    r = direct(cplx(t));
  }
  std::unique_lock lk(mu_);
  cache_[t] = {r.log_mag, r.phase == 0.0 ? 1.0 : -1.0, r.error};
  return r;
}

EvalResult KernelEvaluator::eval(cplx z) const {
  if (z.imag() == 0.0 && z.real() > 0.0) return eval(z.real());
  if (z == cplx(0.0)) throw ResumError(ErrorCode::domain, "kernel at z = 0");
  auto a = laplace(z);
  if (a && a->error <= std::max(quad_.rel_tol, 1e-15 * std::abs(a->log_mag))) return *a;
  return direct(z);
}

double KernelEvaluator::calibrate_t_asym(double rel) const {
  const WeightImpl& g = g_.impl();
  int hits = 0;
  double first = kInf;
  for (double rho : log_grid(std::max(1.0, g_.rho0()), 1e12, 28)) {
    double t = std::exp(g.dlog_gamma(cplx(rho)).real());
    EvalResult d = direct(cplx(t));
    auto a = asymptotic(cplx(t));
    if (!a) {
      hits = 0;
      continue;
    }
    double q = std::exp(d.log_mag - a->log_mag);
    if (std::abs(q - 1.0) < rel) {
      if (hits++ == 0) first = t;
      if (hits >= 2) return first;
    } else {
      hits = 0;
    }
  }
  return kInf;
}

std::vector<std::pair<double, KernelSample>> KernelEvaluator::cached() const {
  std::shared_lock lk(mu_);
  return {cache_.begin(), cache_.end()};
}

void KernelEvaluator::write_cache(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw ResumError(ErrorCode::io, "cannot write " + path);
  f << "# weight=" << w_.canonical() << "\n# kind=" << (kind_ == KernelKind::K ? "K" : "Kstar")
    << "\n# quad=" << quad_.hash() << "\nlog10_t,log_absK,sign\n"
    << std::setprecision(17);
  for (auto& [t, s] : cached()) f << std::log10(t) << ',' << s.log_abs << ',' << (s.sign < 0 ? -1 : 1) << '\n';
}

bool KernelEvaluator::load_cache(const std::string& path) {
  std::ifstream f(path);
  if (!f) return false;
  std::string line, wline, kline, qline;
  std::getline(f, wline);
  std::getline(f, kline);
  std::getline(f, qline);
  if (wline != "# weight=" + w_.canonical()) return false;
  if (kline != std::string("# kind=") + (kind_ == KernelKind::K ? "K" : "Kstar")) return false;
  if (qline != "# quad=" + quad_.hash()) return false;
  std::getline(f, line);  // column header
  std::map<double, KernelSample> m;
  while (std::getline(f, line)) {
    std::istringstream is(line);
    double lt, la;
    int sg;
    char c1, c2;
    if (!(is >> lt >> c1 >> la >> c2 >> sg)) return false;
    m[std::pow(10.0, lt)] = {la, static_cast<double>(sg), 0.0};
  }
  std::unique_lock lk(mu_);
  for (auto& kv : m) cache_.insert(kv);
  return true;
}

LogRule log_t_rule(double u_lo, double u_hi, double panel, int order) {
  LogRule r;
  const Rule& gl = gauss_legendre(order);
  int np = std::max(1, static_cast<int>(std::ceil((u_hi - u_lo) / panel)));
  double h = (u_hi - u_lo) / np;
  for (int p = 0; p < np; ++p) {
    double a = u_lo + p * h;
    for (size_t i = 0; i < gl.x.size(); ++i) {
      double u = a + 0.5 * h * (gl.x[i] + 1.0);
      double t = std::exp(u);
      r.t.push_back(t);
      r.w.push_back(0.5 * h * gl.w[i] * t);
    }
  }
  return r;
}

std::pair<cplx, double> kernel_moment(const KernelEvaluator& ke, double n) {
  // integrate in u = log t panel by panel until t^n K(t) has dropped far below its peak
  const double panel = 0.25;
  const int order = 20;
  double u = -40.0;
  double peak = -kInf;
  Neumaier sr;
  double err = 0.0, l1 = 0.0;
  double scale = kNaN;
  int quiet = 0;
  for (int p = 0; p < 4000; ++p) {
    LogRule r = log_t_rule(u, u + panel, panel, order);
    double pmax = -kInf;
    for (size_t i = 0; i < r.t.size(); ++i) {
      EvalResult k = ke.eval(r.t[i]);
      double lv = n * std::log(r.t[i]) + k.log_mag;
      pmax = std::max(pmax, lv);
      if (std::isnan(scale)) scale = lv;
      double v = std::exp(lv - scale) * r.w[i] * (k.phase == 0.0 ? 1.0 : -1.0);
      sr.add(v);
      l1 += std::abs(v);
      err += std::abs(v) * std::min(k.error, 1.0);
    }
    peak = std::max(peak, pmax);
    u += panel;
    if (u > 0.0 && pmax < peak - 45.0) {
      if (++quiet >= 4) break;
    } else {
      quiet = 0;
    }
  }
  double v = sr.value();
  cplx lv(scale + std::log(std::abs(v)), v < 0 ? kPi : 0.0);
  return {lv, (err + 1e-16 * l1) / std::abs(v)};
}

double moment_check(const KernelEvaluator& ke, int n) {
  if (n < 0 || n > 12) throw ResumError(ErrorCode::precondition, "moment_check supports 0 <= n <= 12");
  auto [lv, e] = kernel_moment(ke, n);
  (void)e;
  double target = ke.log_moment(n);
  if (lv.imag() != 0.0) return kInf;
  return std::abs(std::expm1(lv.real() - target));
}

}  // namespace resum
