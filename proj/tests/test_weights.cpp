#include <doctest.h>

#include "resum/weights.hpp"

using namespace resum;

TEST_SUITE("weights") {
  TEST_CASE("denjoy construction") {
    Weight w = log_weight();
    CHECK(w.L(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w.log_L(cplx(0.0)) == cplx(0.0));
    CHECK(w.canonical() == "denjoy:a0=0;1:1");
    Weight w2 = log_weight(2.0);
    for (double r : {1.0, 10.0, 1e5}) CHECK(w2.L(r) == doctest::Approx(std::pow(std::log(r + kE), 2)));
    CHECK_THROWS_AS(make_denjoy_weight({0.0, {}}), ResumError);
    try {
      make_denjoy_weight({0.0, {}});
    } catch (const ResumError& e) {
      CHECK(e.code() == ErrorCode::invalid_weight);
    }
    try {
      make_denjoy_weight({1.0, {}});
      FAIL("expected fast-growth");
    } catch (const ResumError& e) {
      CHECK(e.code() == ErrorCode::fast_growth);
    }
    Weight w3 = make_denjoy_weight({0.3, {{1, 0.5}, {2, 1.5}, {3, 1.0}}});
    CHECK(w3.log_gamma(0.0) == 0.0);
    CHECK(std::abs(w3.log_L(cplx(0.0))) < 1e-15);
  }

  TEST_CASE("sector values of log L") {
    Weight w = log_weight();
    double rho = 1e6, th = 0.1;
    double im = w.log_L(std::polar(rho, th)).imag();
    CHECK(im / (th * w.eps(rho)) == doctest::Approx(1.0).epsilon(0.1));
    try {
      w.log_L(cplx(-2 * kE, 0.0));
      FAIL("expected domain error");
    } catch (const ResumError& e) {
      CHECK(e.code() == ErrorCode::domain);
    }
    cplx s(3.0, 7.0);
    CHECK(std::abs(w.log_L(std::conj(s)) - std::conj(w.log_L(s))) < 1e-15);
    CHECK(std::abs(w.log_L(s).real() - w.log_L(std::abs(s))) < 1.0);
  }

  TEST_CASE("epsilon closed forms") {
    Weight w = log_weight();
    CHECK(w.eps(0.0) == 0.0);
    double r = kE * kE - kE;
    CHECK(w.eps(r) == doctest::Approx(r / (kE * kE * 2.0)).epsilon(1e-14));
    Weight w2 = log_weight(2.0);
    for (double rho : {1.0, 50.0, 1e7}) CHECK(w2.eps(rho) == doctest::Approx(2 * w.eps(rho)).epsilon(1e-14));
  }

  TEST_CASE("closed-form epsilon matches central differences") {
    std::vector<Weight> ws = {log_weight(), log_weight(2.0), exp_log_weight(0.5),
                              make_denjoy_weight({0.2, {{1, 1.0}, {2, 2.0}}}),
                              make_denjoy_weight({0.0, {{1, 1.0}, {3, 1.0}}})};
    for (const Weight& w : ws) {
      for (double rho : log_grid(10.0, 1e8, 15)) {
        double h = 1e-4 * rho;
        double fd = rho * (std::log(w.L(rho + h)) - std::log(w.L(rho - h))) / (2 * h);
        CHECK(w.eps(rho) == doctest::Approx(fd).epsilon(1e-5));
        cplx s = std::polar(rho, 0.7);
        cplx num = numeric_epsilon(w.impl(), s);
        CHECK(std::abs(w.epsilon(s) - num) < 1e-6 * std::abs(num));
      }
    }
  }

  TEST_CASE("ell for large t") {
    Weight w = make_denjoy_weight({0.3, {{1, 1.0}, {2, 1.0}}});
    double t = 600.0;
    CHECK(w.ell(t) == doctest::Approx(w.log_L(std::exp(t))).epsilon(1e-12));
    CHECK(w.ell(700.0) > w.ell(600.0));
    double h = 1e-3;
    double fd = (w.ell(2000 + h) - w.ell(2000 - h)) / (2 * h);
    CHECK(w.ell_prime(2000.0) == doctest::Approx(fd).epsilon(1e-6));
  }

  TEST_CASE("raw gamma kinds") {
    Weight b = borel_weight();
    for (int n = 0; n < 20; ++n) CHECK(b.log_gamma(n + 1.0) == doctest::Approx(std::lgamma(n + 1.0)));
    CHECK(std::abs(b.log_gamma(cplx(4.0)) - std::log(6.0)) < 1e-13);
    cplx s(2.5, -3.0);
    CHECK(std::abs(b.impl().dlog_gamma(s) - digamma_c(s)) < 1e-14);
    Weight c = make_raw_weight(RawFamily::constant, 3.0);
    CHECK(c.eps(100.0) == 0.0);
    CHECK(c.log_L(7.0) == doctest::Approx(std::log(3.0)));
  }

  TEST_CASE("complex log gamma") {
    // Gamma(1/2) = sqrt(pi), Gamma(1+i) known modulus pi/sinh(pi) for |Gamma(i)|^2 * ...
    CHECK(std::abs(lgamma_c(0.5) - 0.5 * std::log(kPi)) < 1e-14);
    cplx g = std::exp(lgamma_c(cplx(0.0, 1.0)));
    CHECK(std::norm(g) == doctest::Approx(kPi / std::sinh(kPi)).epsilon(1e-13));
    for (double x : {0.3, 1.7, 12.5, 40.2}) CHECK(lgamma_c(x).real() == doctest::Approx(std::lgamma(x)).epsilon(1e-14));
    cplx s(-3.3, 2.0);
    cplx rec = std::exp(lgamma_c(s + 1.0) - lgamma_c(s));
    CHECK(std::abs(rec - s) < 1e-12);
    cplx z(60.0, -80.0);
    double h = 1e-5;
    cplx fd = (lgamma_c(z + h) - lgamma_c(z - h)) / (2 * h);
    CHECK(std::abs(fd - digamma_c(z)) < 1e-8);
    cplx fd2 = (digamma_c(s + h) - digamma_c(s - h)) / (2 * h);
    CHECK(std::abs(fd2 - trigamma_c(s)) < 1e-7);
  }

  TEST_CASE("dual weight") {
    Weight w = log_weight(2.0);
    Weight d = derive_weight(w, Derivation::dual);
    double ratio = d.L(1e6) / std::log(1e6);
    CHECK(ratio >= 0.75);
    CHECK(ratio <= 1.25);
    try {
      derive_weight(log_weight(), Derivation::dual);
      FAIL("expected divergent-integral");
    } catch (const ResumError& e) {
      CHECK(e.code() == ErrorCode::divergent_integral);
    }
    // (rho L~' + 1)/L~ = rho L'/L, via finite differences of L~
    for (double rho : {1e2, 1e4, 1e6, 1e9}) {
      double h = 1e-4 * rho;
      double dL = (d.L(rho + h) - d.L(rho - h)) / (2 * h);
      double lhs = (rho * dL + 1.0) / d.L(rho);
      CHECK(lhs == doctest::Approx(w.eps(rho)).epsilon(1e-3));
      CHECK(d.eps(rho) == doctest::Approx(rho * dL / d.L(rho)).epsilon(1e-4));
    }
    // complex continuation is consistent with the real tables near the axis
    cplx s = std::polar(1e4, 1e-3);
    CHECK(std::abs(d.log_L(s) - d.log_L(1e4)) < 1e-3);
    cplx s2 = std::polar(1e4, 1.0);
    cplx num = numeric_epsilon(d.impl(), s2);
    CHECK(std::abs(d.epsilon(s2) - num) < 1e-5 * std::abs(num));
  }

  TEST_CASE("family and ratio weights") {
    Weight w = log_weight(2.0);
    Weight d = derive_weight(w, Derivation::dual);
    Weight f1 = derive_weight(w, Derivation::family, 1.0);
    for (double rho : {3.0, 1e3, 1e8}) CHECK(f1.L(rho) == doctest::Approx(w.L(rho)).epsilon(1e-12));
    Weight fa = derive_weight(w, Derivation::family, 0.5);
    Weight dfa = derive_weight(fa, Derivation::dual);
    for (double rho : {1e3, 1e5, 1e8}) CHECK(dfa.L(rho) == doctest::Approx(d.L(rho) / 0.5).epsilon(1e-3));
    Weight m = derive_weight(w, Derivation::ratio);
    for (double rho : {1e3, 1e6}) {
      CHECK(m.L(rho) == doctest::Approx(w.L(rho) / d.L(rho)).epsilon(1e-12));
      CHECK(m.eps(rho) == doctest::Approx(1.0 / d.L(rho)).epsilon(1e-12));
      double h = 1e-4 * rho;
      double fd = rho * (m.log_L(rho + h) - m.log_L(rho - h)) / (2 * h);
      CHECK(m.eps(rho) == doctest::Approx(fd).epsilon(1e-5));
    }
    Weight hm = derive_weight(log_weight(), Derivation::harmonic_mean);
    for (double rho : {1.0, 1e4}) {
      Weight base = log_weight();
      CHECK(hm.L(rho) == doctest::Approx(base.L(rho) / (base.eps(rho) * base.L(rho) + 1.0)));
    }
  }

  TEST_CASE("quasianalyticity") {
    CHECK(quasianalyticity_test(log_weight()) == Quasianalyticity::quasianalytic);
    CHECK(quasianalyticity_test(log_weight(2.0)) == Quasianalyticity::non_quasianalytic);
    CHECK(quasianalyticity_test(exp_log_weight(0.5)) == Quasianalyticity::non_quasianalytic);
    CHECK(quasianalyticity_test(make_denjoy_weight({0.0, {{1, 1.0}, {2, 1.0}}})) ==
          Quasianalyticity::quasianalytic);
    CHECK(quasianalyticity_test(make_denjoy_weight({0.0, {{1, 1.0}, {2, 2.0}}})) ==
          Quasianalyticity::non_quasianalytic);
    CHECK(quasianalyticity_test(make_raw_weight(RawFamily::constant, 2.0)) == Quasianalyticity::quasianalytic);
    CHECK(quasianalyticity_test(borel_weight()) == Quasianalyticity::non_quasianalytic);
  }

  TEST_CASE("regularity") {
    auto grid = log_grid(1e3, 1e12, 16);
    RegularityReport r = check_regularity(log_weight(), grid);
    for (int i = 1; i <= 9; ++i) {
      INFO("R" << i << " trend " << r.get(i).trend);
      CHECK(r.get(i).verdict == Verdict::pass);
      CHECK(r.get(i).witness.size() >= 8);
    }
    RegularityReport r7 = check_regularity(exp_log_weight(0.7), grid);
    CHECK(r7.get(7).verdict == Verdict::fail);
    CHECK(r7.get(1).verdict == Verdict::pass);
    RegularityReport lin = check_regularity(make_raw_weight(RawFamily::power, 1.0), grid);
    CHECK(lin.get(1).verdict == Verdict::fail);
    CHECK_THROWS_AS(check_regularity(log_weight(), log_grid(1e3, 1e5, 10)), ResumError);
  }

  TEST_CASE("weight spec round trip") {
    for (std::string s : {"denjoy:a0=0;1:1", "denjoy:a0=0.5", "raw:borel", "raw:mittag_leffler:2",
                          "dual(denjoy:a0=0;1:2)", "family:0.5(denjoy:a0=0;1:2)", "harmonic_mean(denjoy:a0=0;1:1)"}) {
      Weight w = parse_weight(s);
      CHECK(w.canonical() == s);
      Weight w2 = parse_weight(weight_to_json(w));
      CHECK(w2.canonical() == s);
    }
    Weight j = parse_weight(R"({"type":"denjoy","alpha0":0.0,"alphas":[[1,1.0]]})");
    CHECK(j.canonical() == "denjoy:a0=0;1:1");
    CHECK_THROWS_AS(parse_weight("nonsense"), ResumError);
  }
}
