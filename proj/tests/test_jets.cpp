#include <doctest.h>

#include <cmath>
#include <random>

#include "resum/jets_and_classes.hpp"
#include "resum/special_functions.hpp"
#include "resum/weights.hpp"

using namespace resum;

namespace {

Jet jet_of(int N, const std::function<double(int)>& log_abs) {
  Jet j;
  for (int n = 0; n <= N; ++n) j.log_a.emplace_back(log_abs(n), 0.0);
  return j;
}

long double cheb_T(int n, long double x) { return std::cos(n * std::acos(x)); }

}  // namespace

TEST_SUITE("jets") {
  TEST_CASE("chebyshev coefficients of simple functions") {
    auto id = chebyshev_expand([](long double x) { return x; }, -1.0, 1.0, 8);
    CHECK(id.c[1] == doctest::Approx(1.0).epsilon(1e-15));
    for (size_t n = 0; n < id.c.size(); ++n)
      if (n != 1) CHECK(std::abs(id.c[n]) < 1e-15);

    auto t3 = chebyshev_expand([](long double x) { return 4 * x * x * x - 3 * x; }, -1.0, 1.0, 12);
    CHECK(t3.c[3] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(t3.c[1]) < 1e-14);

    // Bernstein ellipse: c_n of 1/(2-x) is 2/sqrt(3) (2+sqrt 3)^{-n}
    auto g = chebyshev_expand([](long double x) { return 1 / (2 - x); }, -1.0, 1.0, 40);
    double rho = 2.0 + std::sqrt(3.0), worst = 0.0;
    for (int n = 0; n <= 30; ++n) worst = std::max(worst, std::abs(g.c[n]) * std::pow(rho, n) / 2.0);
    CHECK(worst <= 1.0);
    CHECK(std::abs(g.c[10] * std::pow(rho, 10) - 2.0 / std::sqrt(3.0)) < 1e-8);
  }

  TEST_CASE("chebyshev recomposition to a Taylor jet") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 4; ++trial) {
      int deg = 4 + 4 * trial;
      std::vector<double> p(deg + 1);
      for (double& c : p) c = u(rng);
      auto poly = [&](long double x) {
        long double v = 0;
        for (int n = deg; n >= 0; --n) v = v * x + p[n];
        return v;
      };
      Jet j = chebyshev_expand(poly, -1.0, 1.0, 2 * deg).to_jet();
      for (int n = 0; n <= deg; ++n) CHECK(std::abs(j.a(n) - cplx(p[n])) < 1e-9);
      auto ce = chebyshev_expand(poly, -0.5, 1.5, 2 * deg);
      for (int k = 0; k < 33; ++k) {
        double x = 0.5 + u(rng);
        CHECK(std::abs(ce(x) - static_cast<double>(poly(x))) < 1e-9);
      }
    }
  }

  TEST_CASE("coefficient decay report") {
    Weight w = log_weight(2.0);
    auto g = chebyshev_expand([](long double x) { return 1 / (2 - x); }, -1.0, 1.0, 40);
    DecayReport r = coeff_decay_report(g, w);
    CHECK(r.geometric_rate == doctest::Approx(std::log(2.0 + std::sqrt(3.0))).epsilon(1e-3));
    CHECK(!r.finite_support);
    for (const DecayFit& f : r.lambda_fits) CHECK(f.stable);

    auto t5 = chebyshev_expand([](long double x) { return cheb_T(5, x); }, -1.0, 1.0, 20);
    DecayReport r5 = coeff_decay_report(t5, w);
    CHECK(r5.finite_support);
    CHECK(r5.nonzero == 1);

    ChebyshevExpansion s;
    for (int n = 0; n <= 200; ++n) s.c.push_back(std::exp(-std::sqrt(double(n))));
    DecayReport rs = coeff_decay_report(s, w);
    REQUIRE(rs.lambda_fits.size() == 3);
    CHECK(rs.lambda_fits[0].stable);
    CHECK(!rs.lambda_fits[1].stable);
    CHECK(!rs.lambda_fits[2].stable);

    ChebyshevExpansion tiny;
    tiny.c = {1.0, 0.5, 0.25};
    CHECK_THROWS_AS(coeff_decay_report(tiny, w), ResumError);
  }

  TEST_CASE("F0 membership of synthetic jets") {
    Weight w = log_weight();
    const int N = 64;
    CHECK(membership_F0(jet_of(N, [](int n) { return n * std::log(2.0); }), w).member);
    CHECK(membership_F0(jet_of(N, [](int n) { return -std::lgamma(n + 1.0); }), w).member);
    CHECK(membership_F0(jet_of(N, [&](int n) { return n * (w.log_L(n) - std::log(std::log(n + 2.0))); }), w).member);
    CHECK(!membership_F0(jet_of(N, [](int n) { return n == 0 ? 0.0 : n * std::log(double(n)); }), w).member);
    CHECK(!membership_F0(jet_of(N, [&](int n) { return n * w.log_L(n); }), w).member);
    CHECK(!membership_F0(jet_of(N, [&](int n) { return w.log_gamma(n + 1.0); }), w).member);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lc(-2.0, 2.0), lq(0.0, 2.0), fq(0.3, 0.8);
    for (int k = 0; k < 4; ++k) {
      double c = lc(rng), q = lq(rng), f = std::log(fq(rng));
      CHECK(membership_F0(jet_of(N, [&](int n) { return c + n * q; }), w).member);
      CHECK(!membership_F0(jet_of(N, [&](int n) { return c + n * (f + w.log_L(n)); }), w).member);
    }

    CHECK_THROWS_AS(membership_F0(jet_of(8, [](int) { return 0.0; }), w), ResumError);
  }

  TEST_CASE("F0 membership of the sine jet") {
    auto ce = chebyshev_expand([](long double x) { return std::sin(x); }, -1.0, 1.0, 40, "sin");
    Jet j = ce.to_jet();
    MembershipDiagnostic d = membership_F0(j, log_weight());
    CHECK(d.member);
  }

  TEST_CASE("star domains") {
    StarDomain D = StarDomain::disk(2.0);
    for (cplx w : {cplx(1.0, 0.0), cplx(-3.0, 4.0), cplx(0.0, -0.5)})
      CHECK(std::abs(D.minkowski(w) - std::abs(w) / 2.0) < 1e-12);

    StarDomain sq = StarDomain::polygon({cplx(1, -1), cplx(1, 1), cplx(-1, 1), cplx(-1, -1)});
    CHECK(sq.minkowski(cplx(1, 0)) == doctest::Approx(1.0));
    CHECK(sq.minkowski(cplx(1, 1)) == doctest::Approx(1.0));
    CHECK(sq.minkowski(cplx(0, -3)) == doctest::Approx(3.0));
    cplx w(0.3, -0.7);
    CHECK(sq.minkowski(2.5 * w) == doctest::Approx(2.5 * sq.minkowski(w)).epsilon(1e-12));
    CHECK(sq.boundary_radius(kPi / 4) == doctest::Approx(std::sqrt(2.0)));

    CHECK_THROWS_AS(StarDomain::polygon({cplx(1, 1), cplx(1, -1), cplx(-1, -1), cplx(-1, 1)}), ResumError);
    CHECK_THROWS_AS(StarDomain::polygon({cplx(1, 1), cplx(2, 1), cplx(2, 2)}), ResumError);
  }

  TEST_CASE("growth diagnostics on the strip") {
    Weight w = log_weight(), w2 = log_weight(2.0);
    SeriesEvaluator e1(w, SeriesKind::E);
    auto F = [&](cplx z) { return eval_series_function(e1, cplx(0, 1) * z); };
    GrowthRegion line;
    line.c_minus = -kInf;
    line.c_plus = kInf;
    line.Y = 2.0;
    MembershipDiagnostic d = growth_diagnostic(F, w2, ClassTag::A_interval, line);
    CHECK(d.member);
    CHECK(d.score <= 0.0);
    // a slower majorant weight can only raise the excess
    CHECK(growth_diagnostic(F, w, ClassTag::A_interval, line).raw_score <= d.raw_score);

    EntireRep E = singular_transform(Jet::geometric(1.0, 1.0), w);
    GrowthRegion wide;
    wide.c_minus = -2.0;
    wide.c_plus = 2.0;
    MembershipDiagnostic dw = growth_diagnostic(E, ClassTag::A_interval, wide);
    CHECK(!dw.member);
    CHECK(dw.score > 0.0);

    EntireRep T6 = singular_transform(Jet::from_values({-1.0, 0.0, 18.0, 0.0, -48.0, 0.0, 32.0}), w);
    GrowthRegion pm;
    pm.poly_mode = true;
    pm.Y = 1.0;
    MembershipDiagnostic dp = growth_diagnostic(T6, ClassTag::A_interval, pm);
    CHECK(dp.member);
    double C = 0.0;
    for (auto& [k, v] : dp.constants)
      if (k == "C") C = v;
    CHECK(C <= 10.0);
    CHECK_THROWS_AS(growth_diagnostic(F, w, ClassTag::A_interval, pm), ResumError);
  }

  TEST_CASE("growth diagnostics on sectors and star domains") {
    Weight w = log_weight();
    EntireRep E = singular_transform(Jet::geometric(1.0, 1.0), w);
    GrowthRegion half;
    half.c_minus = -0.5;
    half.c_plus = 0.5;
    CHECK_NOTHROW(growth_diagnostic(E, ClassTag::A_plus, half));
    CHECK(growth_diagnostic(E, ClassTag::A_plus, half).member);
    GrowthRegion star;
    star.omega = StarDomain::polygon({cplx(1, -1), cplx(1, 1), cplx(-1, 1), cplx(-1, -1)});
    star.u_max = 20.0;
    CHECK(growth_diagnostic(E, ClassTag::A_omega_star, star).member);
  }

  TEST_CASE("lacunary counterexample") {
    Weight s = exp_log_weight(1.0 / 3.0), L2 = log_weight(2.0);
    LacunaryJet lj = lacunary_counterexample_jet(s, L2, 3);
    REQUIRE(lj.log_n.size() == 3);
    for (size_t k = 1; k < lj.log_n.size(); ++k) CHECK(lj.log_n[k] > lj.log_n[k - 1]);
    REQUIRE(lj.certificate.size() == 3);
    for (const auto& c : lj.certificate) CHECK(c.exceeds());
    CHECK(lj.delta > 0.0);
    CHECK(membership_F0(lacunary_counterexample_jet(s, L2, 3, 64).jet, s).member);

    CHECK(lacunary_counterexample_jet(s, L2, 0).log_n.empty());
    CHECK_THROWS_AS(lacunary_counterexample_jet(log_weight(), L2, 2), ResumError);
  }

  TEST_CASE("diagnostic json") {
    MembershipDiagnostic d = membership_F0(jet_of(32, [](int n) { return -std::lgamma(n + 1.0); }), log_weight());
    std::string js = diagnostic_to_json(d);
    CHECK(js.find("\"member\"") != std::string::npos);
    CHECK(js.find("F0") != std::string::npos);
  }
}
