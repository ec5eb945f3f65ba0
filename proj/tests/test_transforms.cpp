#include <doctest.h>

#include <random>

#include "resum/saddle.hpp"
#include "resum/transforms.hpp"

using namespace resum;

namespace {

Jet poly_jet() { return Jet::from_values({1.0, -2.0, 0.5, 3.0, 0.0, -1.0, 0.25}); }

cplx poly(cplx x) {
  const double c[] = {1.0, -2.0, 0.5, 3.0, 0.0, -1.0, 0.25};
  cplx v = 0.0;
  for (int n = 6; n >= 0; --n) v = v * x + c[n];
  return v;
}

}  // namespace

TEST_SUITE("transforms") {
  TEST_CASE("singular transform and its inverse") {
    Weight w = log_weight();
    EntireRep one = singular_transform(Jet::from_values({1.0}), w);
    REQUIRE(one.log_b.size() == 1);
    CHECK(std::exp(one.log_b[0].real()) == doctest::Approx(1.0 / w.L(1.0)).epsilon(1e-14));

    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    std::vector<cplx> a;
    for (int n = 0; n < 20; ++n) a.emplace_back(nd(rng), nd(rng));
    Jet j = Jet::from_values(a);
    Jet back = inverse_singular(singular_transform(j, w));
    REQUIRE(back.log_a.size() == j.log_a.size());
    for (size_t n = 0; n < a.size(); ++n) {
      CHECK(back.log_a[n].real() == doctest::Approx(j.log_a[n].real()).epsilon(1e-15));
      CHECK(std::abs(std::remainder(back.log_a[n].imag() - j.log_a[n].imag(), 2 * kPi)) < 1e-15);
    }

    EntireRep r;
    r.w = w;
    for (int n = 0; n < 10; ++n) r.log_b.push_back(-w.log_gamma(n + 1.0));
    for (cplx l : inverse_singular(r).log_a) CHECK(std::abs(l) < 1e-14);

    EntireRep c;
    c.w = w;
    c.log_b = {std::log(3.0)};
    CHECK(std::exp(inverse_singular(c).log_a[0].real()) == doctest::Approx(3.0 * std::exp(w.log_gamma(1.0))).epsilon(1e-14));
  }

  TEST_CASE("entirety diagnostic") {
    Weight w = log_weight();
    CHECK(singular_transform(Jet::geometric(1.0, 1.0), w).entire);
    std::vector<cplx> g;
    for (int n = 0; n <= 40; ++n) g.push_back(std::exp(w.log_gamma(n + 1.0)));
    EntireRep r = singular_transform(Jet::from_values(g), w);
    CHECK(!r.entire);
    CHECK(r.radius == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("Grandi and exponential sums under Borel") {
    KernelEvaluator ke(borel_weight());
    SummationResult g = moment_sum(Jet::geometric(1.0, -1.0), ke);
    CHECK(std::abs(g.value - 0.5) < 1e-8);
    CHECK(g.error < 1e-8);
    std::vector<cplx> inv;
    for (int n = 0; n <= 25; ++n) inv.push_back(std::exp(-std::lgamma(n + 1.0)));
    CHECK(std::abs(moment_sum(Jet::from_values(inv), ke).value - std::exp(1.0)) < 1e-6);
    SummationResult z = moment_sum(Jet::from_values({0.0, 0.0}), ke);
    CHECK(z.value == cplx(0.0));
    CHECK(z.error == 0.0);
  }

  TEST_CASE("geometric jet recovers 1/(1-z) off the cut") {
    Weight w = log_weight();
    KernelEvaluator ke(w);
    EntireRep rep = singular_transform(Jet::geometric(1.0, 1.0), w);
    for (cplx z : {cplx(-1.0), cplx(-5.0), cplx(0.0, 2.0)}) {
      SummationResult r = regular_transform(rep, ke, z);
      CHECK(std::abs(r.value - 1.0 / (1.0 - z)) < 1e-3);
    }
    CHECK_THROWS_AS(regular_transform(rep, ke, 1.2), ResumError);
    try {
      regular_transform(rep, ke, 1.2);
    } catch (const ResumError& e) {
      CHECK(e.code() == ErrorCode::divergent_integrand);
    }
  }

  TEST_CASE("analytic source and the origin") {
    Weight w = log_weight();
    KernelEvaluator ke(w);
    // 1/(2-x) = sum x^n / 2^(n+1)
    EntireRep rep = singular_transform(Jet::geometric(0.5, 0.5), w);
    for (double x : {-0.9, 0.0, 0.9}) CHECK(std::abs(regular_transform(rep, ke, x).value - 1.0 / (2.0 - x)) < 1e-4);
    EntireRep p = singular_transform(poly_jet(), w);
    CHECK(std::abs(regular_transform(p, ke, 0.0).value - 1.0) < 1e-10);
  }

  TEST_CASE("linearity") {
    Weight w = log_weight();
    KernelEvaluator ke(w);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<cplx> a, b, s;
      cplx lam(nd(rng), nd(rng));
      for (int n = 0; n <= 6; ++n) {
        a.emplace_back(nd(rng));
        b.emplace_back(nd(rng));
        s.push_back(a.back() + lam * b.back());
      }
      double x = 0.3 + 0.2 * trial;
      cplx ra = regular_transform(singular_transform(Jet::from_values(a), w), ke, x).value;
      cplx rb = regular_transform(singular_transform(Jet::from_values(b), w), ke, x).value;
      cplx rs = regular_transform(singular_transform(Jet::from_values(s), w), ke, x).value;
      CHECK(std::abs(rs - (ra + lam * rb)) <= 1e-10 * std::abs(rs) + 1e-12);
      cplx ms = moment_sum(Jet::from_values(s), ke).value;
      cplx ma = moment_sum(Jet::from_values(a), ke).value, mb = moment_sum(Jet::from_values(b), ke).value;
      CHECK(std::abs(ms - (ma + lam * mb)) <= 1e-10 * std::abs(ms) + 1e-12);
    }
  }

  TEST_CASE("regularity probe") {
    Weight w = log_weight();
    KernelEvaluator ke(w);
    EntireRep e = singular_transform(Jet::geometric(1.0, 1.0), w);
    for (double x : {0.0, 0.3, 0.7}) CHECK(std::abs(regular_transform(e, ke, x).value - 1.0 / (1.0 - x)) < 1e-3);
  }

  TEST_CASE("polynomials on the Psi contours") {
    Weight w = log_weight();
    KernelEvaluator ke(w);
    EntireRep p = singular_transform(poly_jet(), w);
    Contour plus = build_contour(w, ContourRole::psi_plus, 40.0);
    Contour minus = build_contour(w, ContourRole::psi_minus, 40.0);
    for (double t : {0.0, 0.5, 1.0, -0.7}) {
      cplx real = regular_transform(p, ke, t).value;
      CHECK(std::abs(real - poly(t)) < 1e-10);
      SummationResult rp = regular_transform_pm(p, ke, t >= 0 ? plus : minus, t);
      SummationResult rm = regular_transform_pm(p, ke, t >= 0 ? minus : plus, t);
      CHECK(std::abs(rp.value - real) < 1e-6);
      CHECK(std::abs(rm.value - real) < 1e-6);
      CHECK(std::abs(rp.value - real) <= rp.error);
      if (t == 0.0) CHECK(std::abs(rp.value - 1.0) < 1e-8);
    }
    CHECK_THROWS_AS(regular_transform_pm(p, ke, build_contour(w, ContourRole::mellin_line, 1.0), 0.5), ResumError);
  }

  TEST_CASE("analytic source on the Psi contour") {
    Weight w = log_weight();
    KernelEvaluator ke(w);
    EntireRep rep = singular_transform(Jet::geometric(0.5, 0.5), w);
    Contour plus = build_contour(w, ContourRole::psi_plus, 40.0);
    CHECK(std::abs(regular_transform_pm(rep, ke, plus, 0.5).value - regular_transform(rep, ke, 0.5).value) < 1e-3);
  }

  TEST_CASE("weights must match") {
    KernelEvaluator ke(borel_weight());
    CHECK_THROWS_AS(regular_transform(singular_transform(poly_jet(), log_weight()), ke, 0.5), ResumError);
  }

  TEST_CASE("json") {
    Jet j = Jet::from_values({1.0, cplx(0.0, -2.0), 0.0, 3.5});
    j.tail = Jet::Geometric{cplx(1, 1), 0.5};
    Jet k = jet_from_json(jet_to_json(j));
    REQUIRE(k.log_a.size() == j.log_a.size());
    for (size_t n = 0; n < j.log_a.size(); ++n) {
      CHECK(k.log_a[n].real() == j.log_a[n].real());
      CHECK(k.log_a[n].imag() == j.log_a[n].imag());
    }
    REQUIRE(k.tail);
    CHECK(k.tail->c == j.tail->c);
    CHECK(k.provenance == j.provenance);
    CHECK_THROWS_AS(jet_from_json("{\"coeffs\": 3}"), ResumError);
    Jet plain = jet_from_json("{\"coeffs\": [2, [0, -1], 0]}");
    CHECK(std::abs(plain.a(0) - 2.0) < 1e-15);
    CHECK(std::abs(plain.a(1) - cplx(0, -1)) < 1e-15);
    CHECK(plain.a(2) == cplx(0.0));
  }
}
