#include "resum/quadrature.hpp"

#include <cstdio>
#include <map>
#include <mutex>
#include <queue>

namespace resum {

namespace {

const double xgk[11] = {0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
                        0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
                        0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
                        0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
                        0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
                        0.0};
const double wgk[11] = {0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
                        0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
                        0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
                        0.123491976262065851077208980628069, 0.134709217311473325928054001771707,
                        0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
                        0.149445554002916905664936468389821};
const double wg[5] = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                      0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                      0.295524224714752870173892994651338};

struct Panel {
  double a, b;
  QuadResult r;
  bool operator<(const Panel& o) const { return r.abs_err < o.r.abs_err; }
};

}  // namespace

std::string QuadratureSpec::hash() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "rt=%.3g;at=%.3g;ms=%d;tail=%s", rel_tol, abs_tol, max_subdiv,
                tail == TailPolicy::asymptotic_K ? "asymptotic-K" : "hard-cutoff");
  return buf;
}

QuadResult gk21(const CFun& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx fc = f(c);
  cplx rk = fc * wgk[10], rg = 0.0;
  double l1 = std::abs(fc) * wgk[10];
  for (int j = 0; j < 10; ++j) {
    cplx f1 = f(c - h * xgk[j]), f2 = f(c + h * xgk[j]);
    rk += wgk[j] * (f1 + f2);
    l1 += wgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) rg += wg[j / 2] * (f1 + f2);
  }
  QuadResult q;
  q.value = rk * h;
  q.l1 = l1 * std::abs(h);
  double diff = std::abs((rk - rg) * h);
  // QUADPACK-style error scaling
  q.abs_err = diff > 0 ? diff * std::min(1.0, std::pow(200.0 * diff / std::max(q.l1, 1e-300), 1.5)) : 0.0;
  q.abs_err = std::max(q.abs_err, 50 * 2.2e-16 * q.l1);
  q.evals = 21;
  if (!std::isfinite(q.value.real()) || !std::isfinite(q.value.imag())) q.converged = false;
  return q;
}

QuadResult integrate_adaptive(const CFun& f, double a, double b, double abs_tol, double rel_tol,
                              int max_panels) {
  std::priority_queue<Panel> heap;
  Panel p0{a, b, gk21(f, a, b)};
  QuadResult tot = p0.r;
  if (!p0.r.converged) return tot;
  heap.push(p0);
  int panels = 1;
  while (tot.abs_err > std::max(abs_tol, rel_tol * std::abs(tot.value))) {
    if (panels >= max_panels) {
      tot.converged = false;
      break;
    }
    Panel p = heap.top();
    heap.pop();
    double m = 0.5 * (p.a + p.b);
    Panel l{p.a, m, gk21(f, p.a, m)}, r{m, p.b, gk21(f, m, p.b)};
    if (!l.r.converged || !r.r.converged) {
      tot.converged = false;
      break;
    }
    tot.value += l.r.value + r.r.value - p.r.value;
    tot.abs_err += l.r.abs_err + r.r.abs_err - p.r.abs_err;
    tot.l1 += l.r.l1 + r.r.l1 - p.r.l1;
    tot.evals += 42;
    heap.push(l);
    heap.push(r);
    panels += 1;
  }
  // recompute the error sum to wash out drift from the running updates
  double e = 0.0;
  cplx v = 0.0;
  while (!heap.empty()) {
    e += heap.top().r.abs_err;
    v += heap.top().r.value;
    heap.pop();
  }
  tot.abs_err = e;
  tot.value = v;
  return tot;
}

const Rule& gauss_legendre(int n) {
  static std::map<int, Rule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

Rule clenshaw_curtis(int n) {
  Rule r;
  r.x.resize(n + 1);
  r.w.assign(n + 1, 0.0);
  if (n == 0) {
    r.x[0] = 0.0;
    r.w[0] = 2.0;
    return r;
  }
  for (int k = 0; k <= n; ++k) {
    r.x[k] = std::cos(kPi * k / n);
    double s = 0.0;
    for (int j = 1; j <= n / 2; ++j) {
      double b = (2 * j == n) ? 1.0 : 2.0;
      s += b / (4.0 * j * j - 1.0) * std::cos(2.0 * j * k * kPi / n);
    }
    double c = (k == 0 || k == n) ? 1.0 : 2.0;
    r.w[k] = c / n * (1.0 - s);
  }
  return r;
}

}  // namespace resum
