#pragma once

#include <functional>
#include <string>
#include <vector>

#include "resum/saddle.hpp"
#include "resum/transforms.hpp"

namespace resum {

/// f = sum c_n T_n(chi(x)) on [a, b], chi the affine map onto [-1, 1]
struct ChebyshevExpansion {
  double a = -1.0, b = 1.0;
  std::vector<double> c;
  std::string source;

  double chi(double x) const { return (2.0 * x - (a + b)) / (b - a); }
  double operator()(double x) const;  // Clenshaw
  /// Taylor jet at x = 0 of the truncated expansion
  Jet to_jet() const;
};

/// coefficients from samples at the n_max+1 Chebyshev-Gauss-Lobatto nodes; the cosine sums run in
/// long double so that coefficients far below the sample scale stay meaningful
ChebyshevExpansion chebyshev_expand(const std::function<long double(long double)>& f, double a, double b, int n_max,
                                    std::string source = "");

struct DecayFit {
  double delta = 1.0;
  double C = 0.0;           // fitted on the lower half of the index range
  double validation = 0.0;  // worst case on the upper half, same units as C
  bool stable = false;      // validation <= 1.1 C
};

struct DecayReport {
  std::vector<DecayFit> lambda_fits;    // |c_n| <= C exp(-Lambda_L(n)/delta), delta in {1, 1/2, 1/4}
  double geometric_rate = 0.0;          // least-squares slope of -log|c_n| against n
  double geometric_C = 0.0;             // and the matching constant in |c_n| <= C exp(-rate n)
  int nonzero = 0;
  bool finite_support = false;
};

/// throws insufficient_data with fewer than 8 coefficients
DecayReport coeff_decay_report(const ChebyshevExpansion& ce, const Weight& w);

enum class ClassTag { F0, A_interval, A_omega, A_plus, A_minus, A_omega_star };
const char* to_string(ClassTag t);

struct Sample {
  cplx z = 0.0;
  double log_F = 0.0, log_majorant = 0.0;
};

struct MembershipDiagnostic {
  ClassTag tag = ClassTag::F0;
  double score = 0.0;      // validation-half worst excess minus the constant fitted on the lower half
  double raw_score = 0.0;  // max over all samples of log|F| - log majorant
  bool member = false;
  std::vector<std::pair<std::string, double>> constants;
  std::vector<Sample> samples;
  bool clipped = false;  // far samples dropped for lack of precision
  std::string note;
};

/// s_n = log|a_n|/n - log L(n) over the top half of the indices; needs N >= 16
MembershipDiagnostic membership_F0(const Jet& jet, const Weight& w);

/// star-shaped (about 0) polygon or disk
class StarDomain {
 public:
  static StarDomain disk(double radius);
  /// vertices counterclockwise; the origin must be interior and every ray must cross the boundary once
  static StarDomain polygon(std::vector<cplx> vertices);
  /// H(w) = inf{ lambda > 0 : w in lambda Omega }
  double minkowski(cplx w) const;
  /// distance from 0 to the boundary along arg = theta
  double boundary_radius(double theta) const;
  bool is_disk() const { return vertices_.empty(); }
  const std::vector<cplx>& vertices() const { return vertices_; }

 private:
  double radius_ = 1.0;
  std::vector<cplx> vertices_;
};

struct GrowthRegion {
  double c_minus = -1.0, c_plus = 1.0;  // interval I = (c_minus, c_plus); +-inf allowed
  double Y = 2.0;                       // strip half-width
  double u_max = 30.0;                  // sampled |u| (or |w|) range
  StarDomain omega = StarDomain::disk(1.0);
  bool poly_mode = false;               // Bernstein-type bound for polynomial transforms
  double poly_delta = 1.0;
  Weight majorant;                      // weight of E in the majorant; the rep's weight when unset
};

/// samples |F| over the region of the class definition and scores it against the majorant
MembershipDiagnostic growth_diagnostic(const EntireRep& rep, ClassTag tag, const GrowthRegion& region,
                                       int budget = 96);
/// same for an entire function given by an evaluator; w supplies the majorant
MembershipDiagnostic growth_diagnostic(const std::function<EvalResult(cplx)>& F, const Weight& w, ClassTag tag,
                                       const GrowthRegion& region, int budget = 96);

struct LacunaryCertificate {
  double log_n = 0.0;      // log n_k
  double r = 0.0;          // r_{n_k} = L3(n_k)
  double log_F_lower = 0.0;  // lower bound for log|F(r)|
  double log_E2 = 0.0;       // log of the L2 majorant exp(L2^{-1}(r)) at r
  bool exceeds() const { return log_F_lower > log_E2; }
};

struct LacunaryJet {
  Jet jet;
  std::vector<double> log_n;     // chosen indices, as log n_k
  std::vector<double> log_coef;  // -omega_{n_k} Lambda_L(n_k)
  double delta = 0.0, A = 0.0;
  std::vector<LacunaryCertificate> certificate;
};

/// Fourier series sum_k exp(-omega Lambda_L(n_k)) e^{i n_k x} with n_k chosen by doubling search;
/// the jet holds its Taylor coefficients at 0 up to jet_order
LacunaryJet lacunary_counterexample_jet(const Weight& w, const Weight& L2, int k_terms, int jet_order = 32);

std::string diagnostic_to_json(const MembershipDiagnostic& d);

}  // namespace resum
