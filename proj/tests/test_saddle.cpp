#include <doctest.h>

#include <random>

#include "resum/saddle.hpp"

using namespace resum;

namespace {

double grid_sup(const Weight& w, double r) {
  // brute-force sup of x log r - x log(x L(x)) on a fine log grid
  double best = 0.0;
  for (double y = -40.0; y <= std::log(r) + 2; y += 1e-4) {
    double x = std::exp(y);
    best = std::max(best, x * (std::log(r) - y - w.log_L(x)));
  }
  return best;
}

}  // namespace

TEST_SUITE("saddle") {
  TEST_CASE("Legendre profile of a constant weight") {
    Weight c = make_raw_weight(RawFamily::constant, 3.0);
    for (double r : {1.0, 5.0, 100.0, 1e5}) {
      LegendreValue v = legendre_lambda(c, r);
      CHECK(v.value == doctest::Approx(r / (3.0 * kE)).epsilon(1e-6));
      CHECK(v.maximizer == doctest::Approx(r / (3.0 * kE)).epsilon(1e-6));
      CHECK(v.value == doctest::Approx(grid_sup(c, r)).epsilon(1e-6));
    }
  }

  TEST_CASE("Legendre profile at r = 1 against grid search") {
    Weight w = log_weight();
    LegendreValue v = legendre_lambda(w, 1.0);
    CHECK(v.value > 0.0);
    CHECK(v.value == doctest::Approx(grid_sup(w, 1.0)).epsilon(1e-6));
  }

  TEST_CASE("Legendre lemma") {
    Weight w = log_weight();
    for (double r : {1e3, 1e4, 1e5, 1e6}) {
      double q = legendre_lambda(w, kE * r * w.L(r)).value / r;
      CHECK(q >= 0.9);
      CHECK(q <= 1.1);
    }
    auto rs = log_grid(1e3, 1e9, 20);
    for (double r : rs) {
      double lr = legendre_lambda(w, r).value;
      for (double t : {1.5, 2.0, 5.0, 10.0, 100.0}) CHECK(legendre_lambda(w, r * t).value <= lr * t);
    }
    double l6 = legendre_lambda(w, 1e6).value;
    for (double lam : {2.0, 10.0}) {
      double q = legendre_lambda(w, lam * 1e6).value / (lam * l6);
      CHECK(q >= 0.8);
      CHECK(q <= 1.25);
    }
    // eps(Lambda(rho))/eps(rho) is 1.44 at 1e4 and decreases toward 1
    double prev_q = kInf;
    for (double rho : {1e4, 1e6, 1e8, 1e12}) {
      double q = w.eps(legendre_lambda(w, rho).value) / w.eps(rho);
      CHECK(q >= 1.0);
      CHECK(q < prev_q);
      if (rho >= 1e6) CHECK(q <= 1.4);
      prev_q = q;
    }
    double C = 0.0;
    for (double k : log_grid(1.0, 1e8, 40))
      for (double n : log_grid(1.0, k, 20)) C = std::max(C, n * (w.log_L(k) - w.log_L(n)) / (k + n));
    CHECK(C <= 4.0);
  }

  TEST_CASE("profile table and integer variant") {
    Weight w = log_weight(2.0);
    LegendreProfile p(w, 10.0, 1e8, 16);
    for (size_t i = 1; i < p.r().size(); ++i) {
      CHECK(p.lambda()[i] >= p.lambda()[i - 1]);
      CHECK(p.maximizer()[i] >= p.maximizer()[i - 1]);
    }
    CHECK(p(3.3e5) == doctest::Approx(legendre_lambda(w, 3.3e5).value).epsilon(1e-3));
    for (double r : {1e3, 1e5, 1e7}) {
      LegendreValue v = legendre_lambda(w, r);
      double m = log_mu(w, r);
      CHECK(m <= v.value + 1e-9);
      CHECK(v.value - m <= 2 * w.log_L(v.maximizer));
    }
  }

  TEST_CASE("saddle solve") {
    Weight w = log_weight();
    double rs = 1e6;
    cplx z = std::exp(w.log_L(rs) + w.eps(rs));
    SaddlePoint sp = solve_saddle(w, z);
    CHECK(sp.rho == doctest::Approx(rs).epsilon(1e-8));
    CHECK(sp.theta == 0.0);
    CHECK(sp.residual < 1e-10);
    try {
      solve_saddle(w, 0.5);
      FAIL("expected below-threshold");
    } catch (const ResumError& e) {
      CHECK(e.code() == ErrorCode::below_threshold);
    }
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lr(std::log(1e4), std::log(1e9)), th(-1.3, 1.3);
    for (int i = 0; i < 100; ++i) {
      cplx s = std::polar(std::exp(lr(rng)), th(rng));
      cplx zz = std::exp(w.impl().dlog_gamma(s));
      SaddlePoint p = solve_saddle(w, zz);
      cplx back = std::exp(w.log_L(p.s) + w.epsilon(p.s));
      CHECK(std::abs(back - zz) < 1e-9 * std::abs(zz));
    }
  }

  TEST_CASE("psi contours") {
    Weight w = log_weight();
    Contour cp = build_contour(w, ContourRole::psi_plus, 40.0, 32);
    Contour cm = build_contour(w, ContourRole::psi_minus, 40.0, 32);
    REQUIRE(cp.nodes.size() == cm.nodes.size());
    CHECK(cp.nodes.front() == cplx(0.0));
    for (size_t i = 0; i < cp.nodes.size(); ++i) {
      CHECK(cm.nodes[i] == std::conj(cp.nodes[i]));
      if (i > 0) CHECK(std::abs(cp.nodes[i]) > std::abs(cp.nodes[i - 1]));
    }
    double r0 = std::abs(psi_curve(w, w.rho0()));
    double prev = kPi;
    for (size_t i = 0; i < cp.nodes.size(); ++i) {
      if (std::abs(cp.nodes[i]) <= r0 * (1 + 1e-12)) continue;
      double a = std::arg(cp.nodes[i]);
      CHECK(a > 0.0);
      CHECK(a < prev);
      prev = a;
      CHECK(std::abs(std::arg(cp.preimage[i]) - kPi / 2) < 1e-8);
      cplx z = std::exp(w.log_L(cp.preimage[i]) + w.epsilon(cp.preimage[i]));
      CHECK(std::abs(z - cp.nodes[i]) < 1e-8 * std::abs(z));
    }
    // sum of weights integrates dz exactly
    cplx tot = 0.0;
    for (auto v : cp.weights) tot += v;
    CHECK(std::abs(tot - cp.nodes.back()) < 1e-8 * std::abs(cp.nodes.back()));
    CHECK(std::abs(cp.nodes.back()) == doctest::Approx(40.0).epsilon(1e-10));
    CHECK_THROWS_AS(build_contour(w, ContourRole::psi_plus, 2.0), ResumError);
  }

  TEST_CASE("Mellin line and gamma_R") {
    Weight b = borel_weight();
    ContourOptions o;
    o.c = 0.5;
    o.tol = 1e-14;
    Contour ml = build_contour(b, ContourRole::mellin_line, 0.0, 64, o);
    for (double t : {0.5, 1.0, 3.0}) {
      cplx s = 0.0;
      for (size_t i = 0; i < ml.nodes.size(); ++i)
        s += ml.weights[i] * std::exp(lgamma_c(ml.nodes[i]) - ml.nodes[i] * std::log(t));
      s /= cplx(0.0, 2 * kPi);
      CHECK(std::abs(s - std::exp(-t)) < 1e-10);
    }
    Weight w = log_weight();
    o.R = 10.0;
    Contour g = build_contour(w, ContourRole::gamma_R, 0.0, 32, o);
    cplx wind = 0.0, area = 0.0;
    for (size_t i = 0; i < g.nodes.size(); ++i) {
      wind += g.weights[i] / g.nodes[i];
      area += g.weights[i];
    }
    CHECK(std::abs(wind - cplx(0.0, 2 * kPi)) < 1e-10);
    CHECK(std::abs(area) < 1e-8);
    double th = 8.0 * w.eps(inverse_L(w, 10.0));
    for (size_t i = 0; i < g.nodes.size(); ++i) {
      double m = std::abs(g.nodes[i]), a = std::abs(std::arg(g.nodes[i]));
      if (g.segment[i] == 0) CHECK(m == doctest::Approx(10.0));
      if (g.segment[i] == 0) CHECK(a <= th + 1e-12);
      if (g.segment[i] == 2) CHECK(m == doctest::Approx(100.0));
      if (g.segment[i] == 2) CHECK(a >= th - 1e-12);
      if (g.segment[i] == 1 || g.segment[i] == 3) CHECK(a == doctest::Approx(th));
    }
  }

  TEST_CASE("H profile") {
    Weight w = log_weight();
    HProfile h(w);
    for (double psi : {0.01, 0.02}) {
      double q = h.loglogH(psi) * psi / (kPi / 2);
      CHECK(q >= 0.7);
      CHECK(q <= 1.3);
    }
    for (double psi : {0.003, 0.1, 0.5, 1.2}) CHECK(h.loglogH(kPi - psi) == doctest::Approx(h.loglogH(psi)).epsilon(1e-12));
    double prev = kInf;
    for (double psi = 0.001; psi < kPi / 2; psi += 0.005) {
      double v = h.loglogH(psi);
      CHECK(v < prev);
      prev = v;
    }
    CHECK_THROWS_AS(h.loglogH(0.0), ResumError);
    CHECK_THROWS_AS(h.loglogH(4.0), ResumError);
    double A = scan_H_decrement(h, {0.05, 0.2}, {10.0, 100.0});
    CHECK(std::isfinite(A));
    // H continuous across delta
    double d = h.delta();
    CHECK(std::abs(h.loglogH(d * (1 - 1e-9)) - h.loglogH(d * (1 + 1e-9))) < 1e-6);
  }
}
