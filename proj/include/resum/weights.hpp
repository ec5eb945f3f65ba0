#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "resum/common.hpp"

namespace resum {

struct MultiIndex {
  double alpha0 = 0.0;
  std::vector<std::pair<int, double>> alphas;  // (k, alpha_k)
};

enum class WeightKind { denjoy, raw_gamma, derived };
enum class RawFamily { borel, mittag_leffler, constant, power };
enum class Derivation { dual, harmonic_mean, family, ratio };

/// Analytic description of one weight. Methods are unchecked: callers go through Weight.
class WeightImpl {
 public:
  virtual ~WeightImpl() = default;
  virtual cplx log_L(cplx s) const = 0;
  /// eps(s) = s L'(s)/L(s); default is a fourth-order difference in log s.
  virtual cplx epsilon(cplx s) const;
  virtual cplx log_gamma(cplx s) const { return s * log_L(s); }
  /// d/ds log gamma = log L + eps
  virtual cplx dlog_gamma(cplx s) const { return log_L(s) + epsilon(s); }
  virtual cplx d2log_gamma(cplx s) const;
  virtual double log_L_real(double rho) const { return log_L(cplx(rho)).real(); }
  virtual double eps_real(double rho) const { return epsilon(cplx(rho)).real(); }
  /// ell(t) = log L(e^t); overridden where e^t may overflow
  virtual double ell(double t) const { return log_L_real(std::exp(t)); }
  virtual double ell_prime(double t) const { return eps_real(std::exp(t)); }
  virtual double log_gamma_real(double rho) const { return rho * log_L_real(rho); }
  virtual std::string canonical() const = 0;
  virtual bool closed_form_eps() const { return false; }
};

class Weight {
 public:
  Weight() = default;
  Weight(std::shared_ptr<const WeightImpl> impl, WeightKind kind, double sector, double rho0)
      : impl_(std::move(impl)), kind_(kind), sector_(sector), rho0_(rho0) {}

  WeightKind kind() const { return kind_; }
  double sector_half_angle() const { return sector_; }
  double rho0() const { return rho0_; }
  const WeightImpl& impl() const { return *impl_; }
  bool valid() const { return impl_ != nullptr; }

  // domain-checked complex evaluation
  cplx log_L(cplx s) const;
  cplx epsilon(cplx s) const;
  cplx log_gamma(cplx s) const;

  // real ray
  double log_L(double rho) const { return impl_->log_L_real(rho); }
  double L(double rho) const { return std::exp(impl_->log_L_real(rho)); }
  double eps(double rho) const { return impl_->eps_real(rho); }
  double log_gamma(double rho) const { return impl_->log_gamma_real(rho); }
  double ell(double t) const { return impl_->ell(t); }
  double ell_prime(double t) const { return impl_->ell_prime(t); }

  std::string canonical() const { return impl_->canonical(); }
  void check_sector(cplx s) const;

  // provenance; empty where not applicable
  const MultiIndex* multi_index() const { return mi_ ? mi_.get() : nullptr; }
  const Weight* base() const { return base_ ? base_.get() : nullptr; }
  Derivation derivation() const { return derivation_; }
  double family_a() const { return family_a_; }
  RawFamily raw_family() const { return raw_family_; }
  double raw_param() const { return raw_param_; }

 private:
  friend Weight make_denjoy_weight(const MultiIndex&);
  friend Weight make_raw_weight(RawFamily, double);
  friend Weight derive_weight(const Weight&, Derivation, double);
  std::shared_ptr<const WeightImpl> impl_;
  WeightKind kind_ = WeightKind::denjoy;
  double sector_ = kPi - 0.2;
  double rho0_ = 1e3;
  std::shared_ptr<const MultiIndex> mi_;
  std::shared_ptr<const Weight> base_;
  Derivation derivation_ = Derivation::dual;
  double family_a_ = 1.0;
  RawFamily raw_family_ = RawFamily::borel;
  double raw_param_ = 0.0;
};

Weight make_denjoy_weight(const MultiIndex& alpha);
/// param: alpha for mittag_leffler, c for constant, a for power; unused for borel
Weight make_raw_weight(RawFamily fam, double param = 0.0);
Weight derive_weight(const Weight& w, Derivation d, double a = 1.0);

// shorthands for the weights used throughout tests and experiments
Weight log_weight(double power = 1.0);           // log^p(rho+e)
Weight exp_log_weight(double a);                 // exp(log^a(rho+1))
Weight borel_weight();

enum class Quasianalyticity { quasianalytic, non_quasianalytic, undetermined };
Quasianalyticity quasianalyticity_test(const Weight& w);
const char* to_string(Quasianalyticity q);

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v);

struct RegularityEntry {
  std::string name;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::pair<double, double>> witness;  // (t, measured quantity)
  double trend = 0.0;                              // slope of log|q| against log t
};

struct RegularityReport {
  std::vector<RegularityEntry> entries;  // R1..R9 in order
  const RegularityEntry& get(int i) const { return entries.at(i - 1); }
};

/// grid: rho values, log-spaced
RegularityReport check_regularity(const Weight& w, const std::vector<double>& grid);
std::vector<double> log_grid(double lo, double hi, int n);

/// JSON weight spec or canonical string -> Weight
Weight parse_weight(const std::string& spec);
std::string weight_to_json(const Weight& w);

// numeric helpers shared by derived kinds
cplx numeric_epsilon(const WeightImpl& w, cplx s);

}  // namespace resum
