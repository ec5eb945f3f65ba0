#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resum/saddle.hpp"
#include "resum/special_functions.hpp"

namespace resum {

enum class Provenance { sampled, analytic, synthetic };
const char* to_string(Provenance p);

/// Taylor coefficients a_0..a_N at the origin stored as log a_n (real part log|a_n|, imaginary part
/// the phase). An optional geometric tail continues the jet with a_n = c q^n for n > N.
struct Jet {
  struct Geometric {
    cplx c = 1.0, q = 1.0;
  };
  std::vector<cplx> log_a;
  std::optional<Geometric> tail;
  Provenance provenance = Provenance::synthetic;

  int N() const { return static_cast<int>(log_a.size()) - 1; }
  cplx a(int n) const;

  static Jet from_values(const std::vector<cplx>& a, Provenance p = Provenance::synthetic);
  static Jet geometric(cplx c, cplx q, int N = 0);  // a_n = c q^n for all n
};

/// F(z) = sum b_n z^n with b_n = a_n / gamma(n+1)
struct EntireRep {
  Weight w;
  std::vector<cplx> log_b;
  std::optional<Jet::Geometric> tail;  // tail of the jet; F picks up c E(qz) on top of the finite part
  bool entire = true;
  double radius = kInf;  // radius of convergence estimate when not entire

  /// F(z); finite part summed exactly, tail through the E evaluator
  EvalResult eval(cplx z, double tol = 1e-12) const;
};

EntireRep singular_transform(const Jet& jet, const Weight& w);
Jet inverse_singular(const EntireRep& rep);

struct SummationResult {
  cplx value = 0.0;
  double error = kInf;  // absolute
  double t_lo = 0.0, t_hi = 0.0;
  std::string kernel_cache_id;
  double cancellation = 1.0;
  int evaluations = 0;
  std::string note;
};

/// R F(x) = int_0^inf F(xt) K(t) dt for complex x
SummationResult regular_transform(const EntireRep& rep, const KernelEvaluator& ke, cplx x,
                                  const QuadratureSpec& quad = {});

/// (R^+- F)(t) = int over the contour of F(tz) K(z) dz; psi_plus for t >= 0 gives R^+, psi_minus R^-
/// (the roles swap for t < 0)
SummationResult regular_transform_pm(const EntireRep& rep, const KernelEvaluator& ke, const Contour& contour,
                                     double t, const QuadratureSpec& quad = {});

/// (gamma)-sum of sum a_n: regular transform of the singular transform at x = 1
SummationResult moment_sum(const Jet& jet, const KernelEvaluator& ke, const QuadratureSpec& quad = {});

std::string jet_to_json(const Jet& j);
Jet jet_from_json(const std::string& s);
std::string summation_to_json(const SummationResult& r);

}  // namespace resum
