#include "resum/weights.hpp"

#include <algorithm>
#include <sstream>

#include "resum/quadrature.hpp"

namespace resum {

namespace {

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(15);
  os << x;
  return os.str();
}

// exp_k(1) for k = 0..3
const double kExpTower[4] = {1.0, kE, 15.154262241479259, 3814279.1047602501};

class DenjoyImpl final : public WeightImpl {
 public:
  explicit DenjoyImpl(MultiIndex mi) : mi_(std::move(mi)) {}

  cplx log_L(cplx s) const override {
    cplx v = 0.0;
    if (mi_.alpha0 > 0 && s != cplx(0.0)) v += std::exp(mi_.alpha0 * std::log(std::log(s + 1.0)));
    for (auto [k, a] : mi_.alphas) {
      cplx y = s + kExpTower[k];
      for (int j = 0; j < k; ++j) y = std::log(y);
      v += a * std::log(y);
    }
    return v;
  }

  cplx epsilon(cplx s) const override {
    if (s == cplx(0.0)) return 0.0;
    cplx e = 0.0;
    if (mi_.alpha0 > 0)
      e += mi_.alpha0 * std::exp((mi_.alpha0 - 1.0) * std::log(std::log(s + 1.0))) * s / (s + 1.0);
    for (auto [k, a] : mi_.alphas) {
      cplx x = s + kExpTower[k], y = x, prod = 1.0;
      for (int j = 0; j < k; ++j) {
        y = std::log(y);
        prod *= y;
      }
      e += a * s / (x * prod);
    }
    return e;
  }

  double log_L_real(double rho) const override {
    if (rho > 1e300) return ell(std::log(rho));
    double v = 0.0;
    if (mi_.alpha0 > 0 && rho > 0) v += std::pow(std::log1p(rho), mi_.alpha0);
    for (auto [k, a] : mi_.alphas) {
      double y = rho + kExpTower[k];
      for (int j = 0; j < k; ++j) y = std::log(y);
      v += a * std::log(y);
    }
    return v;
  }

  double eps_real(double rho) const override {
    if (rho <= 0) return 0.0;
    double e = 0.0;
    if (mi_.alpha0 > 0) e += mi_.alpha0 * std::pow(std::log1p(rho), mi_.alpha0 - 1.0) * rho / (rho + 1.0);
    for (auto [k, a] : mi_.alphas) {
      double x = rho + kExpTower[k], y = x, prod = 1.0;
      for (int j = 0; j < k; ++j) {
        y = std::log(y);
        prod *= y;
      }
      e += a * rho / (x * prod);
    }
    return e;
  }

  double ell(double t) const override {
    if (t < 690.0) return log_L_real(std::exp(t));
    double v = 0.0;
    if (mi_.alpha0 > 0) v += std::pow(t + std::log1p(std::exp(-t)), mi_.alpha0);
    for (auto [k, a] : mi_.alphas) {
      double y = t + std::log1p(std::exp(kExpTower[k - 1] - t));
      for (int j = 1; j < k; ++j) y = std::log(y);
      v += a * std::log(y);
    }
    return v;
  }

  double ell_prime(double t) const override {
    if (t < 690.0) return eps_real(std::exp(t));
    double e = 0.0;
    if (mi_.alpha0 > 0) e += mi_.alpha0 * std::pow(t, mi_.alpha0 - 1.0);
    for (auto [k, a] : mi_.alphas) {
      double y = t + std::log1p(std::exp(kExpTower[k - 1] - t)), prod = y;
      for (int j = 1; j < k; ++j) {
        y = std::log(y);
        prod *= y;
      }
      e += a / prod;
    }
    return e;
  }

  std::string canonical() const override {
    std::string s = "denjoy:a0=" + fmt_num(mi_.alpha0);
    for (auto [k, a] : mi_.alphas) s += ";" + std::to_string(k) + ":" + fmt_num(a);
    return s;
  }
  bool closed_form_eps() const override { return true; }

 private:
  MultiIndex mi_;
};

class BorelImpl final : public WeightImpl {
 public:
  explicit BorelImpl(double alpha) : a_(alpha) {}
  cplx log_gamma(cplx s) const override { return lgamma_c(a_ * s); }
  cplx log_L(cplx s) const override { return s == cplx(0.0) ? cplx(kInf) : lgamma_c(a_ * s) / s; }
  cplx dlog_gamma(cplx s) const override { return a_ * digamma_c(a_ * s); }
  cplx d2log_gamma(cplx s) const override { return a_ * a_ * trigamma_c(a_ * s); }
  cplx epsilon(cplx s) const override {
    if (s == cplx(0.0)) return 0.0;
    return dlog_gamma(s) - log_gamma(s) / s;
  }
  double log_gamma_real(double rho) const override { return std::lgamma(a_ * rho); }
  double log_L_real(double rho) const override { return std::lgamma(a_ * rho) / rho; }
  double eps_real(double rho) const override { return epsilon(cplx(rho)).real(); }
  std::string canonical() const override {
    return a_ == 1.0 ? "raw:borel" : "raw:mittag_leffler:" + fmt_num(a_);
  }
  bool closed_form_eps() const override { return true; }

 private:
  double a_;
};

class ConstImpl final : public WeightImpl {
 public:
  explicit ConstImpl(double c) : lc_(std::log(c)), c_(c) {}
  cplx log_L(cplx) const override { return lc_; }
  cplx epsilon(cplx) const override { return 0.0; }
  cplx d2log_gamma(cplx) const override { return 0.0; }
  std::string canonical() const override { return "raw:constant:" + fmt_num(c_); }
  bool closed_form_eps() const override { return true; }

 private:
  double lc_, c_;
};

class PowerImpl final : public WeightImpl {
 public:
  explicit PowerImpl(double a) : a_(a) {}
  cplx log_L(cplx s) const override { return a_ * std::log(s + 1.0); }
  cplx epsilon(cplx s) const override { return a_ * s / (s + 1.0); }
  double ell(double t) const override { return a_ * (t + std::log1p(std::exp(-t))); }
  double ell_prime(double t) const override { return a_ / (1.0 + std::exp(-t)); }
  std::string canonical() const override { return "raw:power:" + fmt_num(a_); }
  bool closed_form_eps() const override { return true; }

 private:
  double a_;
};

// Tail integral T(rho) = int_rho^inf du/(u L(u)) = int_{log rho}^inf exp(-ell(v)) dv, in log scale.
class DualTable {
 public:
  explicit DualTable(std::shared_ptr<const WeightImpl> base) : base_(std::move(base)) {
    const double dv = std::log(10.0) / 64.0;
    int n = static_cast<int>(std::ceil(kVmax / dv));
    dv_ = kVmax / n;
    logT_.resize(n + 1);
    logT_[n] = tail_logT(kVmax);
    const Rule& gl = gauss_legendre(6);
    for (int j = n - 1; j >= 0; --j) {
      double a = j * dv_, b = a + dv_;
      double m = -kInf;
      double vals[6];
      for (int q = 0; q < 6; ++q) {
        double v = 0.5 * (a + b) + 0.5 * dv_ * gl.x[q];
        vals[q] = -base_->ell(v);
        m = std::max(m, vals[q]);
      }
      double s = 0.0;
      for (int q = 0; q < 6; ++q) s += gl.w[q] * std::exp(vals[q] - m);
      logT_[j] = log_add(logT_[j + 1], m + std::log(0.5 * dv_ * s));
    }
  }

  /// log T(e^v)
  double logT(double v) const {
    if (v <= 0.0) return logT_[0];
    if (v >= kVmax) return tail_logT(v);
    int j = std::min(static_cast<int>(v / dv_), static_cast<int>(logT_.size()) - 2);
    double a = j * dv_, u = (v - a) / dv_;
    double y0 = logT_[j], y1 = logT_[j + 1];
    double d0 = -std::exp(-base_->ell(a) - y0) * dv_, d1 = -std::exp(-base_->ell(a + dv_) - y1) * dv_;
    double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    return h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1;
  }

  /// complex T(s) via the arc from |s| to s, returned as log T(s)
  cplx logT_complex(cplx s) const {
    double rho = std::abs(s), th = std::arg(s);
    if (rho <= 1.0 || th == 0.0) return logT(rho > 0 ? std::log(rho) : 0.0);
    double v = std::log(rho);
    double l0 = base_->ell(v);
    const Rule& gl = gauss_legendre(16);
    cplx arc = 0.0;
    for (int q = 0; q < 16; ++q) {
      double tq = 0.5 * th * (1.0 + gl.x[q]);
      arc += gl.w[q] * std::exp(l0 - base_->log_L(std::polar(rho, tq)));
    }
    arc *= 0.5 * th;
    cplx scaled = std::exp(logT(v) + l0) - cplx(0, 1) * arc;
    return std::log(scaled) - l0;
  }

 private:
  static constexpr double kVmax = 690.0;

  double tail_logT(double V) const {
    // int_V^inf exp(-ell(v)) dv with v = e^w, then a v^-p closed form
    const double W = 25.0, dw = 0.5;
    double w0 = std::log(V);
    const Rule& gl = gauss_legendre(8);
    double acc = -kInf;
    for (double a = w0; a < w0 + W - 1e-12; a += dw) {
      double m = -kInf, vals[8];
      for (int q = 0; q < 8; ++q) {
        double w = a + 0.5 * dw * (1.0 + gl.x[q]);
        vals[q] = -base_->ell(std::exp(w)) + w;
        m = std::max(m, vals[q]);
      }
      if (m == -kInf) continue;
      double s = 0.0;
      for (int q = 0; q < 8; ++q) s += gl.w[q] * std::exp(vals[q] - m);
      acc = log_add(acc, m + std::log(0.5 * dw * s));
    }
    double vend = V * std::exp(W);
    double p = (base_->ell(vend) - base_->ell(vend / 10.0)) / std::log(10.0);
    if (!(p > 1.05))
      throw ResumError(ErrorCode::divergent_integral,
                       "tail of int du/(u L(u)) has local exponent " + fmt_num(p) + " <= 1.05");
    double tail = -base_->ell(vend) + std::log(vend) - std::log(p - 1.0);
    return log_add(acc, tail);
  }

  std::shared_ptr<const WeightImpl> base_;
  double dv_ = 0.0;
  std::vector<double> logT_;
};

class DualImpl final : public WeightImpl {
 public:
  explicit DualImpl(std::shared_ptr<const WeightImpl> base)
      : base_(base), tab_(std::make_shared<DualTable>(base)) {}
  DualImpl(std::shared_ptr<const WeightImpl> base, std::shared_ptr<const DualTable> tab)
      : base_(std::move(base)), tab_(std::move(tab)) {}

  cplx log_L(cplx s) const override { return base_->log_L(s) + tab_->logT_complex(s); }
  cplx epsilon(cplx s) const override {
    if (std::abs(s) <= 1.0) return base_->epsilon(s);
    return base_->epsilon(s) - std::exp(-log_L(s));
  }
  double log_L_real(double rho) const override {
    return base_->log_L_real(rho) + tab_->logT(rho > 0 ? std::log(rho) : 0.0);
  }
  double eps_real(double rho) const override {
    if (rho <= 1.0) return base_->eps_real(rho);
    return base_->eps_real(rho) - std::exp(-log_L_real(rho));
  }
  double ell(double t) const override { return base_->ell(t) + tab_->logT(t); }
  double ell_prime(double t) const override {
    if (t <= 0.0) return base_->ell_prime(t);
    return base_->ell_prime(t) - std::exp(-ell(t));
  }
  std::string canonical() const override { return "dual(" + base_->canonical() + ")"; }
  bool closed_form_eps() const override { return base_->closed_form_eps(); }

  const DualTable& table() const { return *tab_; }
  std::shared_ptr<const DualTable> table_ptr() const { return tab_; }

 private:
  std::shared_ptr<const WeightImpl> base_;
  std::shared_ptr<const DualTable> tab_;
};

// M = L / L~ = 1/T; eps_M = 1/L~
class RatioImpl final : public WeightImpl {
 public:
  explicit RatioImpl(std::shared_ptr<const WeightImpl> base) : dual_(base), base_(std::move(base)) {}
  cplx log_L(cplx s) const override { return base_->log_L(s) - dual_.log_L(s); }
  cplx epsilon(cplx s) const override {
    if (std::abs(s) <= 1.0) return 0.0;
    return std::exp(-dual_.log_L(s));
  }
  double log_L_real(double rho) const override {
    return base_->log_L_real(rho) - dual_.log_L_real(rho);
  }
  double eps_real(double rho) const override {
    return rho <= 1.0 ? 0.0 : std::exp(-dual_.log_L_real(rho));
  }
  double ell(double t) const override { return base_->ell(t) - dual_.ell(t); }
  double ell_prime(double t) const override { return t <= 0.0 ? 0.0 : std::exp(-dual_.ell(t)); }
  std::string canonical() const override { return "ratio(" + base_->canonical() + ")"; }
  bool closed_form_eps() const override { return true; }

 private:
  DualImpl dual_;
  std::shared_ptr<const WeightImpl> base_;
};

class HarmonicImpl final : public WeightImpl {
 public:
  explicit HarmonicImpl(std::shared_ptr<const WeightImpl> base) : base_(std::move(base)) {}
  cplx log_L(cplx s) const override {
    cplx lL = base_->log_L(s);
    return lL - std::log(1.0 + base_->epsilon(s) * std::exp(lL));
  }
  double log_L_real(double rho) const override {
    double lL = base_->log_L_real(rho);
    return lL - std::log1p(base_->eps_real(rho) * std::exp(lL));
  }
  double ell(double t) const override {
    double l = base_->ell(t);
    return l - std::log1p(base_->ell_prime(t) * std::exp(l));
  }
  double ell_prime(double t) const override {
    const double h = 1e-3;
    return (-ell(t + 2 * h) + 8 * ell(t + h) - 8 * ell(t - h) + ell(t - 2 * h)) / (12 * h);
  }
  std::string canonical() const override { return "harmonic_mean(" + base_->canonical() + ")"; }

 private:
  std::shared_ptr<const WeightImpl> base_;
};

class FamilyImpl final : public WeightImpl {
 public:
  FamilyImpl(std::shared_ptr<const WeightImpl> base, double a) : dual_(base), base_(std::move(base)), a_(a) {}
  cplx log_L(cplx s) const override { return (1 - a_) * dual_.log_L(s) + a_ * base_->log_L(s); }
  cplx epsilon(cplx s) const override { return (1 - a_) * dual_.epsilon(s) + a_ * base_->epsilon(s); }
  double log_L_real(double rho) const override {
    return (1 - a_) * dual_.log_L_real(rho) + a_ * base_->log_L_real(rho);
  }
  double eps_real(double rho) const override {
    return (1 - a_) * dual_.eps_real(rho) + a_ * base_->eps_real(rho);
  }
  double ell(double t) const override { return (1 - a_) * dual_.ell(t) + a_ * base_->ell(t); }
  double ell_prime(double t) const override {
    return (1 - a_) * dual_.ell_prime(t) + a_ * base_->ell_prime(t);
  }
  std::string canonical() const override {
    return "family:" + fmt_num(a_) + "(" + base_->canonical() + ")";
  }
  bool closed_form_eps() const override { return base_->closed_form_eps(); }

 private:
  DualImpl dual_;
  std::shared_ptr<const WeightImpl> base_;
  double a_;
};

}  // namespace

cplx numeric_epsilon(const WeightImpl& w, cplx s) {
  if (s == cplx(0.0)) return 0.0;
  const double h = 1e-3;
  cplx e1 = std::exp(h), e2 = std::exp(2 * h);
  cplx f = -w.log_L(s * e2) + 8.0 * w.log_L(s * e1) - 8.0 * w.log_L(s / e1) + w.log_L(s / e2);
  return f / (12 * h);
}

cplx WeightImpl::epsilon(cplx s) const { return numeric_epsilon(*this, s); }

cplx WeightImpl::d2log_gamma(cplx s) const {
  double a = std::max(std::abs(s), 1e-2);
  cplx h = 1e-3 * a * (s == cplx(0.0) ? cplx(1.0) : s / std::abs(s));
  return (-dlog_gamma(s + 2.0 * h) + 8.0 * dlog_gamma(s + h) - 8.0 * dlog_gamma(s - h) +
          dlog_gamma(s - 2.0 * h)) /
         (12.0 * h);
}

void Weight::check_sector(cplx s) const {
  if (s != cplx(0.0) && std::abs(std::arg(s)) >= sector_)
    throw ResumError(ErrorCode::domain, "argument " + fmt_num(std::arg(s)) + " outside sector of half-angle " +
                                            fmt_num(sector_));
}

cplx Weight::log_L(cplx s) const {
  check_sector(s);
  return impl_->log_L(s);
}
cplx Weight::epsilon(cplx s) const {
  check_sector(s);
  return impl_->epsilon(s);
}
cplx Weight::log_gamma(cplx s) const {
  check_sector(s);
  return impl_->log_gamma(s);
}

Weight make_denjoy_weight(const MultiIndex& alpha) {
  if (alpha.alpha0 >= 1.0) throw ResumError(ErrorCode::fast_growth, "alpha0 >= 1 grows too fast");
  if (alpha.alpha0 < 0.0) throw ResumError(ErrorCode::invalid_weight, "alpha0 must be in [0,1)");
  bool any = alpha.alpha0 > 0;
  MultiIndex mi;
  mi.alpha0 = alpha.alpha0;
  for (auto [k, a] : alpha.alphas) {
    if (k < 1) throw ResumError(ErrorCode::invalid_weight, "iterated-log level must be >= 1");
    if (k > 3) throw ResumError(ErrorCode::config, "iterated-log level > 3 not supported (exp_4(1) overflows)");
    if (a < 0) throw ResumError(ErrorCode::invalid_weight, "negative exponent");
    if (a > 0) any = true;
    if (a != 0) mi.alphas.emplace_back(k, a);
  }
  if (!any) throw ResumError(ErrorCode::invalid_weight, "all exponents vanish, L is bounded");
  std::sort(mi.alphas.begin(), mi.alphas.end());
  Weight w(std::make_shared<DenjoyImpl>(mi), WeightKind::denjoy, kPi - 0.2, 1e3);
  w.mi_ = std::make_shared<MultiIndex>(mi);
  return w;
}

Weight make_raw_weight(RawFamily fam, double param) {
  std::shared_ptr<const WeightImpl> impl;
  double sector = kPi - 0.2, rho0 = 10.0;
  switch (fam) {
    case RawFamily::borel: impl = std::make_shared<BorelImpl>(1.0); break;
    case RawFamily::mittag_leffler:
      if (!(param > 0)) throw ResumError(ErrorCode::invalid_weight, "mittag_leffler needs alpha > 0");
      impl = std::make_shared<BorelImpl>(param);
      break;
    case RawFamily::constant:
      if (!(param >= 1)) throw ResumError(ErrorCode::invalid_weight, "constant weight needs c >= 1");
      impl = std::make_shared<ConstImpl>(param);
      sector = kPi;
      break;
    case RawFamily::power:
      if (!(param > 0)) throw ResumError(ErrorCode::invalid_weight, "power weight needs a > 0");
      impl = std::make_shared<PowerImpl>(param);
      break;
  }
  Weight w(impl, WeightKind::raw_gamma, sector, rho0);
  w.raw_family_ = fam;
  w.raw_param_ = param;
  return w;
}

Weight derive_weight(const Weight& w, Derivation d, double a) {
  std::shared_ptr<const WeightImpl> impl;
  switch (d) {
    case Derivation::dual: impl = std::make_shared<DualImpl>(w.impl_); break;
    case Derivation::ratio: impl = std::make_shared<RatioImpl>(w.impl_); break;
    case Derivation::harmonic_mean: impl = std::make_shared<HarmonicImpl>(w.impl_); break;
    case Derivation::family:
      if (!(a > 0)) throw ResumError(ErrorCode::config, "family parameter must be > 0");
      impl = std::make_shared<FamilyImpl>(w.impl_, a);
      break;
  }
  Weight out(impl, WeightKind::derived, w.sector_, w.rho0_);
  out.base_ = std::make_shared<Weight>(w);
  out.derivation_ = d;
  out.family_a_ = a;
  return out;
}

Weight log_weight(double power) { return make_denjoy_weight({0.0, {{1, power}}}); }
Weight exp_log_weight(double a) { return make_denjoy_weight({a, {}}); }
Weight borel_weight() { return make_raw_weight(RawFamily::borel); }

const char* to_string(Quasianalyticity q) {
  switch (q) {
    case Quasianalyticity::quasianalytic: return "quasianalytic";
    case Quasianalyticity::non_quasianalytic: return "non_quasianalytic";
    case Quasianalyticity::undetermined: return "undetermined";
  }
  return "undetermined";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Quasianalyticity quasianalyticity_test(const Weight& w) {
  if (const MultiIndex* mi = w.multi_index()) {
    if (mi->alpha0 > 0) return Quasianalyticity::non_quasianalytic;
    int kmax = 0;
    for (auto [k, a] : mi->alphas) kmax = std::max(kmax, k);
    for (int j = 1; j <= kmax; ++j) {
      double aj = 0.0;
      for (auto [k, a] : mi->alphas)
        if (k == j) aj = a;
      if (aj > 1.0) return Quasianalyticity::non_quasianalytic;
      if (aj < 1.0) return Quasianalyticity::quasianalytic;
    }
    return Quasianalyticity::quasianalytic;
  }
  // local exponent p(v) = v ell'(v) of the integrand exp(-ell(v)), rho from 1e3 to 1e260
  std::vector<double> ps;
  for (double v : {7.0, 20.0, 60.0, 200.0, 600.0}) {
    double p = (w.ell(v * 1.1) - w.ell(v / 1.1)) / std::log(1.21);
    ps.push_back(p);
  }
  double tail = ps.back();
  if (tail > 1.05 && ps[ps.size() - 2] > 1.05) return Quasianalyticity::non_quasianalytic;
  if (tail < 0.95 && ps[ps.size() - 2] < 0.95) return Quasianalyticity::quasianalytic;
  return Quasianalyticity::undetermined;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1));
  return g;
}

namespace {

double trend_slope(const std::vector<std::pair<double, double>>& pts) {
  // least squares slope of log|q| on log t
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (auto [t, q] : pts) {
    if (!(std::abs(q) > 0) || !(t > 0)) continue;
    double x = std::log(t), y = std::log(std::abs(q));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return -kInf;  // identically zero: decays trivially
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Verdict decay_verdict(double slope) {
  if (slope < -0.05) return Verdict::pass;
  if (slope > -0.01) return Verdict::fail;
  return Verdict::inconclusive;
}

}  // namespace

RegularityReport check_regularity(const Weight& w, const std::vector<double>& grid) {
  if (grid.size() < 8) throw ResumError(ErrorCode::config, "regularity grid needs at least 8 points");
  double lo = *std::min_element(grid.begin(), grid.end()), hi = *std::max_element(grid.begin(), grid.end());
  if (!(lo > 0) || hi / lo < 1e3) throw ResumError(ErrorCode::config, "regularity grid must span >= 3 decades");
  const double h = 0.05;
  auto d = [&](double t, int order) {
    double f[5];
    for (int k = -2; k <= 2; ++k) f[k + 2] = w.ell(t + k * h);
    switch (order) {
      case 1: return (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h);
      case 2: return (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h);
      default: return (-f[0] + 2 * f[1] - 2 * f[3] + f[4]) / (2 * h * h * h);
    }
  };
  RegularityReport rep;
  rep.entries.resize(9);
  for (int i = 0; i < 9; ++i) rep.entries[i].name = "R" + std::to_string(i + 1);
  bool concave = true, bounded = true, absdec = true;
  double prev_abs2 = kInf, max1 = -kInf, first1 = kNaN;
  for (double rho : grid) {
    double t = std::log(rho);
    double l0 = w.ell(t), l1 = w.ell_prime(t), l2 = d(t, 2), l3 = d(t, 3);
    if (std::isnan(first1)) first1 = l1;
    double scale2 = 1e-7 * std::max(std::abs(l1), 1e-300);
    if (l2 > scale2) concave = false;
    max1 = std::max(max1, l1);
    if (std::abs(l2) > prev_abs2 * (1 + 1e-6) + 1e-14) absdec = false;
    prev_abs2 = std::abs(l2);
    rep.entries[0].witness.emplace_back(t, l1);
    rep.entries[1].witness.emplace_back(t, l2);
    rep.entries[2].witness.emplace_back(t, l2 / l1);
    rep.entries[3].witness.emplace_back(t, l2 * l0 / l1);
    rep.entries[4].witness.emplace_back(t, l3 * l0 / std::abs(l2));
    rep.entries[5].witness.emplace_back(t, l2 * std::log(1.0 / l1) / l1);
    rep.entries[6].witness.emplace_back(t, l1 * l0);
    // sector assumptions
    double e0 = w.eps(rho);
    auto se = [&](cplx s) {
      const double hh = 1e-3;
      return (w.impl().epsilon(s * std::exp(hh)) - w.impl().epsilon(s * std::exp(-hh))) / (2 * hh);
    };
    cplx se0 = se(cplx(rho));
    double q8 = 0, q9 = 0;
    for (double th : {kPi / 4, -kPi / 4, kPi / 2 - 0.1, -(kPi / 2 - 0.1)}) {
      cplx s = std::polar(rho, th);
      q8 = std::max(q8, std::abs(w.impl().epsilon(s) / e0 - 1.0));
      q9 = std::max(q9, std::abs(se(s) / se0 - 1.0));
    }
    rep.entries[7].witness.emplace_back(t, q8);
    rep.entries[8].witness.emplace_back(t, q9);
  }
  (void)first1;
  bounded = std::isfinite(max1);
  for (int i : {0, 2, 3, 5, 6, 7, 8}) {
    auto& e = rep.entries[i];
    e.trend = trend_slope(e.witness);
    e.verdict = decay_verdict(e.trend);
  }
  // (R1) also requires ell' itself to vanish, not just to decrease
  {
    auto& e = rep.entries[0];
    if (e.verdict == Verdict::pass && std::abs(e.witness.back().second) > 0.5) e.verdict = Verdict::inconclusive;
  }
  rep.entries[1].trend = trend_slope(rep.entries[1].witness);
  rep.entries[1].verdict = concave ? Verdict::pass : Verdict::fail;
  if (!bounded) rep.entries[2].verdict = Verdict::fail;
  {
    auto& e = rep.entries[4];
    e.trend = trend_slope(e.witness);
    e.verdict = absdec ? decay_verdict(e.trend) : Verdict::fail;
  }
  return rep;
}

}  // namespace resum
