#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "resum/quadrature.hpp"
#include "resum/weights.hpp"

namespace resum {

enum class EvalMethod { series, asymptotic, quadrature, cache };
const char* to_string(EvalMethod m);

struct EvalResult {
  double log_mag = -kInf;
  double phase = 0.0;
  double error = kInf;        // error estimate relative to |value|
  EvalMethod method = EvalMethod::series;
  double cancellation = 1.0;  // sum of |terms| over |sum|
  bool flagged = false;       // extrapolated / outside the trusted regime

  cplx value() const { return log_mag == -kInf ? cplx(0.0) : std::polar(std::exp(log_mag), phase); }
  cplx log() const { return {log_mag, phase}; }
  static EvalResult from_log(cplx lv, double err, EvalMethod m) {
    EvalResult r;
    r.log_mag = lv.real();
    r.phase = std::remainder(lv.imag(), 2 * kPi);
    r.error = err;
    r.method = m;
    return r;
  }
};

enum class SeriesKind { E, E1, Etilde, Estar };
const char* to_string(SeriesKind k);

/// Power series sum_n c_n z^n with log c_n = -G(n+1), G supplied by the kind:
///   E: log gamma; E1: log Gamma + log gamma; Etilde: -s log eps(s); Estar: s log(L/L~)(s).
class SeriesEvaluator {
 public:
  SeriesEvaluator(const Weight& w, SeriesKind kind, long max_terms = 4'000'000);

  SeriesKind kind() const { return kind_; }
  const Weight& weight() const { return w_; }
  const WeightImpl& g() const { return *g_; }
  long max_terms() const { return max_terms_; }
  double log_coeff(long n) const;

  /// log-space sum; nullopt when the term budget or cancellation budget is exceeded
  std::optional<EvalResult> series(cplx z, double tol) const;
  /// Mellin-Barnes integral -(1/2 pi i) int (pi/sin pi s) exp(-G(s+1)) (-z)^s ds on Re s = -1/2
  std::optional<EvalResult> lindelof(cplx z, double tol) const;
  /// saddle-point main term; flagged bounded-branch estimate outside Omega(pi/2 + delta)
  EvalResult saddle(cplx z) const;

 private:
  Weight w_;
  SeriesKind kind_;
  long max_terms_;
  std::shared_ptr<const WeightImpl> g_;
};

/// Dispatcher: series, then the Mellin-Barnes integral, then the saddle asymptotic.
EvalResult eval_series_function(const SeriesEvaluator& se, cplx z, double tol = 1e-12);

/// saddle main term zE(z) ~ sqrt(2 pi s/eps(s)) exp(s eps(s)) at the saddle s_z.
EvalResult eval_E_asymptotic(const Weight& w, cplx z);

enum class KernelKind { K, Kstar };

struct KernelSample {
  double log_abs = -kInf;
  double sign = 1.0;
  double error = 0.0;
};

/// Kernel K(z) = (1/2 pi i) int gamma(s) z^{-s} ds along a steepest-descent path; K* uses gamma/gamma~.
class KernelEvaluator {
 public:
  KernelEvaluator(const Weight& w, KernelKind kind = KernelKind::K, QuadratureSpec quad = {});

  KernelKind kind() const { return kind_; }
  const Weight& weight() const { return w_; }
  /// the weight whose gamma is the Mellin transform of this kernel (w itself, or L/L~)
  const Weight& mellin_weight() const { return g_; }
  const QuadratureSpec& quad() const { return quad_; }
  std::string cache_id() const;

  /// log gamma(n+1) for the kernel's moment sequence
  double log_moment(double n) const { return g_.log_gamma(n + 1.0); }

  /// real t > 0, cached
  EvalResult eval(double t) const;
  /// complex z in the sector, not cached
  EvalResult eval(cplx z) const;
  /// saddle main term of K, sqrt(s/(2 pi eps(s))) exp(-s eps(s)); nullopt without a saddle
  std::optional<EvalResult> asymptotic(cplx z) const;
  /// Laplace main term exp(Phi(s))/sqrt(2 pi G''(s)); used by eval() past the quadrature's reach
  std::optional<EvalResult> laplace(cplx z) const;

  /// smallest t on the calibration grid where direct and asymptotic agree within rel twice in a row
  double calibrate_t_asym(double rel = 0.05) const;
  void set_t_asym(double t) { t_asym_ = t; }
  double t_asym() const { return t_asym_; }

  std::vector<std::pair<double, KernelSample>> cached() const;
  void write_cache(const std::string& path) const;
  /// loads a cache file written for the same weight and quadrature; false on mismatch
  bool load_cache(const std::string& path);

 private:
  EvalResult direct(cplx z) const;
  Weight w_, g_;
  KernelKind kind_;
  QuadratureSpec quad_;
  double t_asym_ = kInf;
  mutable std::shared_mutex mu_;
  mutable std::map<double, KernelSample> cache_;
};

/// Composite Gauss-Legendre rule in u = log t on [u_lo, u_hi]: nodes t and weights for dt.
struct LogRule {
  std::vector<double> t, w;
};
LogRule log_t_rule(double u_lo, double u_hi, double panel = 0.25, int order = 20);

/// |int_0^inf t^n K(t) dt / gamma(n+1) - 1| (K*: against gamma/gamma~); n <= 12
double moment_check(const KernelEvaluator& ke, int n);

/// int_0^inf t^n K(t) dt in log form (value, relative error)
std::pair<cplx, double> kernel_moment(const KernelEvaluator& ke, double n);

}  // namespace resum
