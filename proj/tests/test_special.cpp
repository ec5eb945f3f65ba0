#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "resum/saddle.hpp"
#include "resum/special_functions.hpp"

using namespace resum;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

double saddle_t(const Weight& w, double rho) { return std::exp(w.log_L(rho) + w.eps(rho)); }

}  // namespace

TEST_SUITE("special") {
  TEST_CASE("Borel series is the exponential") {
    SeriesEvaluator se(borel_weight(), SeriesKind::E);
    EvalResult r = eval_series_function(se, cplx(3, 4), 1e-12);
    CHECK(r.method == EvalMethod::series);
    CHECK(rel(r.value(), std::exp(cplx(3, 4))) < 1e-12);
    CHECK(r.error > 0.0);
    CHECK(rel(eval_series_function(se, 50.0).value(), std::exp(cplx(50.0))) < 1e-11);
    CHECK_THROWS_AS(eval_series_function(se, 1.0, 1e-15), ResumError);
  }

  TEST_CASE("E at the origin") {
    Weight w = log_weight();
    SeriesEvaluator se(w, SeriesKind::E);
    CHECK(eval_series_function(se, 0.0).value().real() == doctest::Approx(1.0 / w.L(1.0)).epsilon(1e-15));
  }

  TEST_CASE("Mittag-Leffler alpha = 2 closed forms") {
    Weight m = make_raw_weight(RawFamily::mittag_leffler, 2.0);
    SeriesEvaluator se(m, SeriesKind::E);
    for (double x : {0.5, 4.0, 30.0}) {
      double ref = std::sinh(std::sqrt(x)) / std::sqrt(x);
      CHECK(eval_series_function(se, x).value().real() == doctest::Approx(ref).epsilon(1e-12));
    }
    CHECK(eval_series_function(se, -9.0).value().real() == doctest::Approx(std::sin(3.0) / 3.0).epsilon(1e-12));
    KernelEvaluator ke(m);
    for (double t : {0.5, 4.0, 30.0}) CHECK(ke.eval(t).value().real() == doctest::Approx(0.5 * std::exp(-std::sqrt(t))).epsilon(1e-10));
  }

  TEST_CASE("E on the negative ray stays bounded") {
    SeriesEvaluator se(log_weight(), SeriesKind::E);
    for (double r : log_grid(1.0, 1e6, 7)) {
      EvalResult e = eval_series_function(se, -r);
      CHECK(std::abs(e.value()) <= 10.0);
      // leading residue: E(z) ~ -1/(z gamma(0)) with gamma(0) = 1
      if (r >= 1e3) CHECK(r * e.value().real() == doctest::Approx(1.0).epsilon(1e-2));
    }
  }

  TEST_CASE("conjugate symmetry") {
    Weight w = log_weight();
    SeriesEvaluator se(w, SeriesKind::E);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> lr(0.0, std::log(14.0)), th(-3.0, 3.0);
    for (int i = 0; i < 12; ++i) {
      cplx z = std::polar(std::exp(lr(rng)), th(rng));
      cplx a = eval_series_function(se, z).value(), b = eval_series_function(se, std::conj(z)).value();
      CHECK(std::abs(a - std::conj(b)) <= 1e-10 * std::abs(a));
    }
    cplx z = saddle_t(w, 1e5) * std::polar(1.0, 0.4);
    EvalResult a = eval_E_asymptotic(w, z), b = eval_E_asymptotic(w, std::conj(z));
    CHECK(a.log_mag == doctest::Approx(b.log_mag).epsilon(1e-13));
    CHECK(a.phase == doctest::Approx(-b.phase).epsilon(1e-10));
  }

  TEST_CASE("E against its saddle asymptotic on the positive ray") {
    Weight w = log_weight();
    SeriesEvaluator se(w, SeriesKind::E);
    double prev = kInf;
    for (double rho : {2e3, 1e4, 1e5, 1e6}) {
      double r = saddle_t(w, rho);
      auto s = se.series(r, 1e-12);
      REQUIRE(s);
      double q = std::exp(s->log_mag - eval_E_asymptotic(w, r).log_mag);
      CHECK(q >= 0.5);
      CHECK(q <= 2.0);
      CHECK(std::abs(q - 1) < prev);
      prev = std::abs(q - 1);
    }
    CHECK_THROWS_AS(eval_E_asymptotic(w, 2.0), ResumError);
    EvalResult off = eval_E_asymptotic(w, -1e3);
    CHECK(off.flagged);
    CHECK(off.log_mag <= -std::log(1e3) + 1e-12);
  }

  TEST_CASE("E1 on the imaginary axis") {
    Weight w = log_weight();
    SeriesEvaluator e1(w, SeriesKind::E1);
    // against a high-precision sum of the series
    EvalResult a = eval_series_function(e1, cplx(0, 50));
    CHECK(a.log_mag == doctest::Approx(4.62149214105518).epsilon(1e-10));
    CHECK(a.phase == doctest::Approx(2.91810779324456).epsilon(1e-9));
    EvalResult b = eval_series_function(e1, cplx(0, 200));
    CHECK(std::abs(b.log_mag - 13.5955896127101) <= b.error);
    for (double x : {1e3, 1e4}) {
      double q = eval_series_function(e1, cplx(0, x)).log_mag / (legendre_lambda(w, x).value * w.eps(x));
      CHECK(q >= 0.2);
      CHECK(q <= 5.0);
    }
  }

  TEST_CASE("Etilde and Estar") {
    Weight w = log_weight(2.0);
    SeriesEvaluator et(w, SeriesKind::Etilde);
    double s = 0.0;
    for (int n = 0; n < 60; ++n) s += std::pow(w.eps(n + 1.0), n + 1.0) * std::pow(0.5, n);
    CHECK(eval_series_function(et, 0.5).value().real() == doctest::Approx(s).epsilon(1e-12));
    EvalResult big = eval_series_function(et, 10.0);
    CHECK(big.method == EvalMethod::asymptotic);
    CHECK(!big.flagged);
    SeriesEvaluator es(w, SeriesKind::Estar);
    CHECK(es.log_coeff(4) == doctest::Approx(-derive_weight(w, Derivation::ratio).log_gamma(5.0)));
  }

  TEST_CASE("Borel kernel") {
    KernelEvaluator ke(borel_weight());
    for (double t : {0.01, 0.1, 1.0, 5.0, 10.0, 50.0}) {
      EvalResult k = ke.eval(t);
      CHECK(std::abs(std::exp(k.log_mag + t) - 1) < 1e-10);
      CHECK(k.phase == 0.0);
    }
    CHECK(ke.eval(1.0).method == EvalMethod::cache);
    CHECK(moment_check(ke, 0) < 1e-10);
    CHECK_THROWS_AS(ke.eval(-1.0), ResumError);
  }

  TEST_CASE("log weight kernel moments") {
    KernelEvaluator ke(log_weight());
    for (int n = 0; n <= 8; ++n) CHECK(moment_check(ke, n) < 1e-3);
    CHECK_THROWS_AS(moment_check(ke, 13), ResumError);
  }

  TEST_CASE("K against its saddle asymptotic, and switching") {
    Weight w = log_weight();
    KernelEvaluator ke(w);
    double prev = kInf;
    for (double rho : {1e4, 1e6, 1e8, 1e10, 1e12}) {
      double t = saddle_t(w, rho);
      EvalResult k = ke.eval(t);
      double q = std::exp(k.log_mag - ke.asymptotic(t)->log_mag);
      CHECK(q >= 0.5);
      CHECK(q <= 2.0);
      CHECK(std::abs(q - 1) < prev);
      prev = std::abs(q - 1);
      CHECK(k.log_mag / (-rho * w.eps(rho)) == doctest::Approx(1.0).epsilon(0.2));
    }
    // past double range of the saddle K underflows every log scale
    EvalResult far = ke.eval(1e4);
    CHECK(far.log_mag == -kInf);
    CHECK(far.flagged);
    double ta = ke.calibrate_t_asym(0.05);
    CHECK(std::isfinite(ta));
    CHECK(ta > 5.0);
  }

  TEST_CASE("kernel cache file") {
    Weight w = log_weight();
    KernelEvaluator ke(w);
    for (double t : {0.5, 1.0, 2.0}) ke.eval(t);
    auto path = (std::filesystem::temp_directory_path() / "resum_kcache_test.csv").string();
    ke.write_cache(path);
    KernelEvaluator again(w);
    REQUIRE(again.load_cache(path));
    EvalResult c = again.eval(1.0);
    CHECK(c.method == EvalMethod::cache);
    CHECK(c.log_mag == doctest::Approx(ke.eval(1.0).log_mag).epsilon(1e-14));
    QuadratureSpec q;
    q.rel_tol = 1e-8;
    KernelEvaluator other(w, KernelKind::K, q);
    CHECK(!other.load_cache(path));
    KernelEvaluator borel(borel_weight());
    CHECK(!borel.load_cache(path));
    std::filesystem::remove(path);
  }

  TEST_CASE("log_t_rule") {
    LogRule r = log_t_rule(-3.0, 2.0);
    double s = 0.0;
    for (size_t i = 0; i < r.t.size(); ++i) s += r.w[i] * r.t[i];
    CHECK(s == doctest::Approx(0.5 * (std::exp(4.0) - std::exp(-6.0))).epsilon(1e-13));
  }
}
