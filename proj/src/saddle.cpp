#include "resum/saddle.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "resum/quadrature.hpp"

namespace resum {

namespace {

// f(y) = x log r - x log(x L(x)) at x = e^y
double legendre_obj(const Weight& w, double log_r, double y) {
  return std::exp(y) * (log_r - y - w.ell(y));
}

}  // namespace

LegendreValue legendre_lambda_log(const Weight& w, double log_r) {
  // coarse scan then golden section around the best cell
  double lo = std::min(log_r, 0.0) - 40.0;
  double hi = std::min(std::max(log_r, 0.0) + 2.0, 700.0);
  const double h = 0.25;
  double best_y = lo, best = -kInf;
  for (double y = lo; y <= hi; y += h) {
    double f = legendre_obj(w, log_r, y);
    if (f > best) best = f, best_y = y;
  }
  if (!(best > 0.0)) return {0.0, 0.0};
  double a = best_y - h, b = best_y + h;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = legendre_obj(w, log_r, c), fd = legendre_obj(w, log_r, d);
  for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - gr * (b - a);
      fc = legendre_obj(w, log_r, c);
    } else {
      a = c, c = d, fc = fd;
      d = a + gr * (b - a);
      fd = legendre_obj(w, log_r, d);
    }
  }
  double y = 0.5 * (a + b);
  // Newton polish on g(y) = log r - y - ell(y) - 1 - ell'(y)
  for (int it = 0; it < 5; ++it) {
    double g = log_r - y - w.ell(y) - 1.0 - w.ell_prime(y);
    const double dh = 1e-5;
    double l2 = (w.ell_prime(y + dh) - w.ell_prime(y - dh)) / (2 * dh);
    double dg = -1.0 - w.ell_prime(y) - l2;
    if (!(dg < 0.0)) break;
    double step = -g / dg;
    if (std::abs(step) > h) break;
    double yn = y + step;
    if (legendre_obj(w, log_r, yn) < legendre_obj(w, log_r, y) - 1e-14 * std::abs(best)) break;
    y = yn;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(y))) break;
  }
  double val = std::max(legendre_obj(w, log_r, y), best);
  return {val, std::exp(y)};
}

LegendreValue legendre_lambda(const Weight& w, double r) {
  if (!(r > 0.0)) throw ResumError(ErrorCode::domain, "legendre_lambda needs r > 0");
  return legendre_lambda_log(w, std::log(r));
}

double log_mu(const Weight& w, double r) {
  double lr = std::log(r);
  LegendreValue lv = legendre_lambda(w, r);
  auto f = [&](double n) { return n == 0.0 ? 0.0 : n * (lr - std::log(n) - w.log_L(n)); };
  double best = 0.0;
  double x = std::floor(lv.maximizer);
  for (double n = std::max(1.0, x - 3); n <= x + 4; n += 1.0) best = std::max(best, f(n));
  return best;
}

LegendreProfile::LegendreProfile(const Weight& w, double r_min, double r_max, int per_decade) : w_(w) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw ResumError(ErrorCode::config, "bad Legendre profile range");
  int n = std::max(2, static_cast<int>(std::ceil(std::log10(r_max / r_min) * per_decade)) + 1);
  r_ = log_grid(r_min, r_max, n);
  for (double r : r_) {
    LegendreValue v = legendre_lambda(w, r);
    lam_.push_back(v.value);
    x_.push_back(v.maximizer);
  }
}

double LegendreProfile::operator()(double r) const {
  if (r < r_.front() || r > r_.back()) return legendre_lambda(w_, r).value;
  auto it = std::upper_bound(r_.begin(), r_.end(), r);
  size_t j = std::min<size_t>(std::max<ptrdiff_t>(it - r_.begin(), 1), r_.size() - 1);
  double u = (std::log(r) - std::log(r_[j - 1])) / (std::log(r_[j]) - std::log(r_[j - 1]));
  if (lam_[j - 1] <= 0.0 || lam_[j] <= 0.0) return (1 - u) * lam_[j - 1] + u * lam_[j];
  return std::exp((1 - u) * std::log(lam_[j - 1]) + u * std::log(lam_[j]));
}

std::optional<double> real_saddle(const WeightImpl& g, double y) {
  auto h = [&](double u) { return g.dlog_gamma(cplx(std::exp(u))).real() - y; };
  double lo = -30.0, hi = 690.0;
  // first upward crossing on a coarse grid; G' need not be monotone near the origin
  double hlo = h(lo), hhi = kNaN;
  bool found = false;
  for (double u = lo + 2.0; u <= 690.0; u += 2.0) {
    double hu = h(u);
    if (!std::isfinite(hu)) break;
    if (hlo <= 0.0 && hu >= 0.0) {
      hi = u, hhi = hu, found = true;
      break;
    }
    lo = u, hlo = hu;
  }
  if (!found || !(hhi >= 0.0)) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    double m = 0.5 * (lo + hi);
    if (h(m) < 0.0)
      lo = m;
    else
      hi = m;
  }
  return std::exp(0.5 * (lo + hi));
}

std::optional<SaddlePoint> find_saddle(const WeightImpl& g, cplx log_z, cplx guess, double tol, double max_arg) {
  cplx u = std::log(guess);
  auto resid = [&](cplx uu) { return g.dlog_gamma(std::exp(uu)) - log_z; };
  cplx F = resid(u);
  int it = 0;
  for (; it < 200 && std::abs(F) > tol; ++it) {
    cplx s = std::exp(u);
    cplx J = s * g.d2log_gamma(s);
    if (J == cplx(0.0) || !std::isfinite(std::abs(J))) return std::nullopt;
    cplx step = -F / J;
    double lam = 1.0;
    bool moved = false;
    while (lam > 1e-12) {
      cplx un = u + lam * step;
      if (std::abs(un.imag()) < max_arg && un.real() < 700.0) {
        cplx Fn = resid(un);
        if (std::isfinite(std::abs(Fn)) && std::abs(Fn) < std::abs(F)) {
          u = un, F = Fn, moved = true;
          break;
        }
      }
      lam *= 0.5;
    }
    if (!moved) break;
  }
  if (!(std::abs(F) <= std::max(tol, 1e-10))) return std::nullopt;
  SaddlePoint p;
  p.s = std::exp(u);
  p.z = std::exp(log_z);
  p.rho = std::exp(u.real());
  p.theta = u.imag();
  p.residual = std::abs(F);
  p.newton_iterations = it;
  return p;
}

SaddlePoint solve_saddle(const Weight& w, cplx z) {
  const WeightImpl& g = w.impl();
  double thresh = g.dlog_gamma(cplx(w.rho0())).real();
  if (!(std::abs(z) > 0.0) || std::log(std::abs(z)) <= thresh)
    throw ResumError(ErrorCode::below_threshold, "|z| below exp(log L(rho0) + eps(rho0))");
  cplx lz = std::log(z);
  auto rho0 = real_saddle(g, lz.real());
  if (!rho0) throw ResumError(ErrorCode::saddle_failure, "no real starting point");
  double e0 = g.eps_real(*rho0);
  double th0 = e0 > 0.0 ? lz.imag() / e0 : 0.0;
  double cap = 0.95 * w.sector_half_angle();
  th0 = std::clamp(th0, -cap, cap);
  auto sp = find_saddle(g, lz, std::polar(*rho0, th0), 1e-13, w.sector_half_angle());
  if (!sp) {
    // retry from a smaller angle
    sp = find_saddle(g, lz, std::polar(*rho0, 0.5 * th0), 1e-13, w.sector_half_angle());
  }
  if (!sp) throw ResumError(ErrorCode::saddle_failure, "Newton did not converge within 200 iterations");
  if (z.imag() == 0.0 && z.real() > 0.0) {
    sp->s = sp->rho;
    sp->theta = 0.0;
  }
  sp->z = z;
  if (sp->rho <= w.rho0()) throw ResumError(ErrorCode::below_threshold, "saddle below rho0");
  return *sp;
}

cplx psi_curve(const Weight& w, double rho) { return std::exp(w.impl().dlog_gamma(cplx(0.0, rho))); }

double psi_of_rho(const Weight& w, double rho) { return w.impl().dlog_gamma(cplx(0.0, rho)).imag(); }

double logH_of_rho(const Weight& w, double rho) {
  cplx s(0.0, rho);
  return (s * w.impl().epsilon(s)).real();
}

namespace {

// appends a Clenshaw-Curtis panel of the map p(x), x in [-1,1], with derivative dp
void add_panel(Contour& c, int seg, int n, const std::function<cplx(double)>& p,
               const std::function<cplx(double)>& dp, const std::function<cplx(double)>& pre = nullptr) {
  n += n % 2;
  Rule r = clenshaw_curtis(n), h = clenshaw_curtis(n / 2);
  // cos(k pi/n) runs from 1 to -1: walk k downward so the panel is traversed forward
  for (int k = n; k >= 0; --k) {
    double x = r.x[k];
    cplx z = p(x);
    cplx d = dp(x);
    cplx wt = r.w[k] * d, wc = k % 2 ? cplx(0.0) : h.w[k / 2] * d;
    if (!c.nodes.empty() && k == n && std::abs(c.nodes.back() - z) <= 1e-14 * std::max(1.0, std::abs(z))) {
      c.weights.back() += wt;
      c.coarse.back() += wc;
      continue;
    }
    c.nodes.push_back(z);
    c.weights.push_back(wt);
    c.coarse.push_back(wc);
    c.segment.push_back(seg);
    c.preimage.push_back(pre ? pre(x) : cplx(0.0));
  }
}

double inverse_ell(const Weight& w, double y) {
  double lo = -30.0, hi = 1e4;
  if (w.ell(lo) >= y) return lo;
  if (w.ell(hi) < y) return kInf;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    double m = 0.5 * (lo + hi);
    (w.ell(m) < y ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double inverse_L(const Weight& w, double R) {
  if (R <= w.L(0.0)) return 0.0;
  return std::exp(inverse_ell(w, std::log(R)));
}

Contour build_contour(const Weight& w, ContourRole role, double r_max, int density, const ContourOptions& opt) {
  Contour c;
  c.role = role;
  if (density < 2) throw ResumError(ErrorCode::config, "contour density must be >= 2");
  if (role == ContourRole::psi_plus || role == ContourRole::psi_minus) {
    double rho0 = w.rho0();
    cplx z0 = psi_curve(w, rho0);
    double r0 = std::abs(z0);
    if (!(r_max > r0))
      throw ResumError(ErrorCode::config, "r_max must exceed r0 = " + std::to_string(r0));
    // preimage of r_max on the imaginary axis, bisection in log rho
    double lo = std::log(rho0), hi = lo;
    while (std::abs(psi_curve(w, std::exp(hi))) < r_max) {
      hi += 2.0;
      if (hi > 690.0) throw ResumError(ErrorCode::config, "r_max beyond the representable curve");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      double m = 0.5 * (lo + hi);
      (std::abs(psi_curve(w, std::exp(m))) < r_max ? lo : hi) = m;
    }
    double u_max = 0.5 * (lo + hi);
    // segment: geometric panels toward 0, uniform ones past z0/8 where K turns over and oscillates
    int nseg = std::max(8, density / 2);
    auto seg_panel = [&](double lo_f, double hi_f) {
      add_panel(c, 0, nseg, [&](double x) { return (lo_f + 0.5 * (x + 1.0) * (hi_f - lo_f)) * z0; },
                [&](double) { return 0.5 * (hi_f - lo_f) * z0; });
    };
    const int grades = 8;
    seg_panel(0.0, std::ldexp(1.0, -grades));
    for (int k = grades; k > 3; --k) seg_panel(std::ldexp(1.0, -k), std::ldexp(1.0, -(k - 1)));
    for (int k = 2; k < 16; ++k) seg_panel(k / 16.0, (k + 1) / 16.0);
    double u0 = std::log(rho0);
    int panels = std::max(1, static_cast<int>(std::ceil((u_max - u0) / std::log(10.0))));
    double du = (u_max - u0) / panels;
    for (int p = 0; p < panels; ++p) {
      double a = u0 + p * du;
      auto uo = [&](double x) { return a + 0.5 * (x + 1.0) * du; };
      add_panel(
          c, 1, density, [&](double x) { return psi_curve(w, std::exp(uo(x))); },
          [&](double x) {
            cplx s(0.0, std::exp(uo(x)));
            cplx z = std::exp(w.impl().dlog_gamma(s));
            return 0.5 * du * z * s * w.impl().d2log_gamma(s);
          },
          [&](double x) { return cplx(0.0, std::exp(uo(x))); });
    }
    std::ostringstream tr;
    tr << std::setprecision(10) << "segment to z(rho0) at rho0=" << rho0 << "; curve cut at |z|=r_max=" << r_max
       << " (rho=" << std::exp(u_max) << ")";
    c.truncation = tr.str();
    if (role == ContourRole::psi_minus) {
      for (auto& z : c.nodes) z = std::conj(z);
      for (auto& v : c.weights) v = std::conj(v);
      for (auto& v : c.coarse) v = std::conj(v);
      for (auto& s : c.preimage) s = std::conj(s);
    }
    return c;
  }
  if (role == ContourRole::mellin_line) {
    double cc = opt.c;
    c.param = cc;
    const WeightImpl& g = w.impl();
    double peak = g.log_gamma(cplx(cc)).real();
    // |t^{-s}| = t^{-c} on the line, so the cut relative to the peak is the same for every t
    double cut = std::log(opt.tol);
    double tau = 1.0;
    auto mag = [&](double t) { return g.log_gamma(cplx(cc, t)).real() - peak; };
    while (std::max(mag(tau), mag(-tau)) > cut && tau < 1e8) tau *= 1.5;
    int panels = std::max(2, static_cast<int>(std::ceil(2 * tau)));
    double h = 2 * tau / panels;
    for (int p = 0; p < panels; ++p) {
      double a = -tau + p * h;
      add_panel(c, 0, std::max(4, density / 2), [&](double x) { return cplx(cc, a + 0.5 * (x + 1.0) * h); },
                [&](double) { return cplx(0.0, 0.5 * h); });
    }
    std::ostringstream tr;
    tr << std::setprecision(10) << "Re s=" << cc << ", |Im s|<=" << tau << " where |gamma(s) t^-s| < " << opt.tol
       << " x peak for t in [" << opt.t_min << "," << opt.t_max << "]";
    c.truncation = tr.str();
    return c;
  }
  // gamma_R: arc |s|=R over |theta|<=theta_R, radials to R^2, outer arc R^2 (counterclockwise)
  double R = opt.R;
  c.param = R;
  if (!(R > 1.0)) throw ResumError(ErrorCode::config, "gamma_R needs R > 1");
  double t = inverse_ell(w, std::log(R));
  double th = std::isfinite(t) ? opt.theta_C * w.ell_prime(t) : 0.0;
  th = std::clamp(th, 1e-3, kPi - 0.05);
  int n = std::max(8, density);
  add_panel(c, 0, n, [&](double x) { return std::polar(R, th * x); },
            [&](double x) { return cplx(0.0, th) * std::polar(R, th * x); });
  double lR = std::log(R);
  add_panel(c, 1, n, [&](double x) { return std::polar(std::exp(lR * (1.5 + 0.5 * x)), th); },
            [&](double x) { return 0.5 * lR * std::polar(std::exp(lR * (1.5 + 0.5 * x)), th); });
  double half = kPi - th;
  add_panel(c, 2, 2 * n, [&](double x) { return std::polar(R * R, kPi + half * x); },
            [&](double x) { return cplx(0.0, half) * std::polar(R * R, kPi + half * x); });
  add_panel(c, 3, n, [&](double x) { return std::polar(std::exp(lR * (1.5 - 0.5 * x)), -th); },
            [&](double x) { return -0.5 * lR * std::polar(std::exp(lR * (1.5 - 0.5 * x)), -th); });
  // close the loop: the last node coincides with the first
  if (std::abs(c.nodes.back() - c.nodes.front()) < 1e-12 * R) {
    c.weights.front() += c.weights.back();
    c.coarse.front() += c.coarse.back();
    c.nodes.pop_back();
    c.weights.pop_back();
    c.coarse.pop_back();
    c.segment.pop_back();
    c.preimage.pop_back();
  }
  std::ostringstream tr;
  tr << std::setprecision(10) << "closed; theta_R=" << th << " = " << opt.theta_C << " eps(L^-1(R))";
  c.truncation = tr.str();
  return c;
}

void write_contour_csv(const Contour& c, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ResumError(ErrorCode::io, "cannot write " + path);
  f << "# " << c.truncation << "\n";
  f << "re,im,weight_re,weight_im,segment_id\n" << std::setprecision(17);
  for (size_t i = 0; i < c.nodes.size(); ++i)
    f << c.nodes[i].real() << ',' << c.nodes[i].imag() << ',' << c.weights[i].real() << ',' << c.weights[i].imag()
      << ',' << c.segment[i] << '\n';
}

HProfile::HProfile(const Weight& w, double rho_lo, double rho_hi, int per_decade)
    : w_(w), rho_lo_(rho_lo > 0.0 ? rho_lo : w.rho0()), rho_hi_(rho_hi) {
  if (!(rho_hi_ > rho_lo_)) throw ResumError(ErrorCode::config, "bad H profile range");
  delta_ = psi_of_rho(w, rho_lo_);
  psi_min_ = psi_of_rho(w, rho_hi_);
  if (!(delta_ > psi_min_) || !(psi_min_ > 0.0) || delta_ >= kPi / 2)
    throw ResumError(ErrorCode::precondition, "psi(rho) is not decreasing into (0, pi/2) on the imaginary axis");
  int n = std::max(2, static_cast<int>(std::ceil(std::log10(rho_hi_ / rho_lo_) * per_decade)) + 1);
  for (double rho : log_grid(rho_lo_, rho_hi_, n)) {
    double lh = logH_of_rho(w, rho);
    if (!(lh > 0.0)) throw ResumError(ErrorCode::precondition, "Re(i rho eps(i rho)) is not positive");
    table_.emplace_back(psi_of_rho(w, rho), std::log(lh));
  }
  std::reverse(table_.begin(), table_.end());
  llh_delta_ = std::log(logH_of_rho(w, rho_lo_));
  double h = 1e-4, u = std::log(rho_lo_);
  double dl = (std::log(logH_of_rho(w, std::exp(u + h))) - std::log(logH_of_rho(w, std::exp(u - h)))) / (2 * h);
  double dp = (psi_of_rho(w, std::exp(u + h)) - psi_of_rho(w, std::exp(u - h))) / (2 * h);
  slope_delta_ = dl / dp;
  c_tail_ = psi_min_ * std::log(logH_of_rho(w, rho_hi_));
}

double HProfile::rho_of_psi(double psi) const {
  double lo = std::log(rho_lo_), hi = std::log(rho_hi_);
  // psi(rho) decreases in rho
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    double m = 0.5 * (lo + hi);
    (psi_of_rho(w_, std::exp(m)) > psi ? lo : hi) = m;
  }
  return std::exp(0.5 * (lo + hi));
}

double HProfile::branch(double psi) const { return std::log(logH_of_rho(w_, rho_of_psi(psi))); }

double HProfile::loglogH(double psi) const {
  if (!(psi > 0.0 && psi < kPi)) throw ResumError(ErrorCode::domain, "psi must lie in (0, pi)");
  if (psi > kPi / 2) psi = kPi - psi;
  if (psi < psi_min_) return c_tail_ / psi;
  if (psi <= delta_) return branch(psi);
  return llh_delta_ + slope_delta_ * (psi - delta_);
}

void HProfile::write_csv(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw ResumError(ErrorCode::io, "cannot write " + path);
  f << "psi,loglogH\n" << std::setprecision(17);
  for (auto [p, v] : table_) f << p << ',' << v << '\n';
  const int n = 64;
  for (int i = 1; i <= n; ++i) {
    double p = delta_ + (kPi / 2 - delta_) * i / n;
    f << p << ',' << loglogH(p) << '\n';
  }
}

double scan_H_decrement(const HProfile& h, const std::vector<double>& psis, const std::vector<double>& rs) {
  for (double A : log_grid(0.1, 1e4, 101)) {
    bool ok = true;
    for (double psi : psis)
      for (double r : rs) {
        double p2 = psi + A / r;
        if (!(p2 < kPi / 2) || h.loglogH(p2) > h.loglogH(psi) - 3.0 / r) ok = false;
      }
    if (ok) return A;
  }
  return kNaN;
}

}  // namespace resum
