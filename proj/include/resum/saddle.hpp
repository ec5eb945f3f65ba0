#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resum/weights.hpp"

namespace resum {

struct LegendreValue {
  double value = 0.0;      // Lambda_L(r)
  double maximizer = 0.0;  // x_r
};

/// Lambda_L(r) = sup_{x>0} [x log r - x log(x L(x))]
LegendreValue legendre_lambda(const Weight& w, double r);
/// same, with the argument given as log r (for r beyond double range)
LegendreValue legendre_lambda_log(const Weight& w, double log_r);
/// integer-restricted variant: max over n >= 0 of n log r - n log(n L(n))
double log_mu(const Weight& w, double r);

class LegendreProfile {
 public:
  LegendreProfile(const Weight& w, double r_min, double r_max, int per_decade = 32);
  double r_min() const { return r_.front(); }
  double r_max() const { return r_.back(); }
  const std::vector<double>& r() const { return r_; }
  const std::vector<double>& lambda() const { return lam_; }
  const std::vector<double>& maximizer() const { return x_; }
  /// log-log linear interpolation inside the cached range, direct evaluation outside
  double operator()(double r) const;

 private:
  Weight w_;
  std::vector<double> r_, lam_, x_;
};

struct SaddlePoint {
  cplx z = 0.0;
  cplx s = 0.0;
  double rho = 0.0, theta = 0.0;
  double residual = kInf;
  int newton_iterations = 0;
};

/// Solves log L(s) + eps(s) = log z with threshold checks (|z| > L(rho0), rho > rho0).
SaddlePoint solve_saddle(const Weight& w, cplx z);

/// Unrestricted Newton solve of G'(s) = log z from a starting point; no threshold checks.
std::optional<SaddlePoint> find_saddle(const WeightImpl& g, cplx log_z, cplx guess, double tol = 1e-12,
                                       double max_arg = kPi - 0.2);

/// Real saddle rho with G'(rho) = y for increasing G' on the positive ray, or nullopt.
std::optional<double> real_saddle(const WeightImpl& g, double y);

enum class ContourRole { psi_plus, psi_minus, mellin_line, gamma_R };

struct Contour {
  ContourRole role = ContourRole::psi_plus;
  std::vector<cplx> nodes;
  std::vector<cplx> weights;  // quadrature weights for the integral of f(z) dz
  std::vector<cplx> coarse;   // embedded half-order rule on the same nodes, for error estimates
  std::vector<int> segment;
  std::vector<cplx> preimage;  // saddle preimage s of each node (psi roles; 0 on the joining segment)
  std::string truncation;      // where and why the contour was cut
  double param = 0.0;          // c for mellin_line, R for gamma_R
};

struct ContourOptions {
  double c = 0.5;                         // mellin_line abscissa
  double R = 10.0;                        // gamma_R radius
  double t_min = 0.1, t_max = 10.0;       // t-range served by a mellin_line
  double tol = 1e-12;
  double theta_C = 8.0;                   // theta_R = C eps(L^{-1}(R))
};

/// psi roles: r_max is the largest |z|; density is nodes per decade of rho.
Contour build_contour(const Weight& w, ContourRole role, double r_max, int density = 32,
                      const ContourOptions& opt = {});
/// z(rho) = exp(log L(i rho) + eps(i rho)), the image of the imaginary axis
cplx psi_curve(const Weight& w, double rho);

void write_contour_csv(const Contour& c, const std::string& path);

class HProfile {
 public:
  explicit HProfile(const Weight& w, double rho_lo = -1.0, double rho_hi = 1e300, int per_decade = 8);
  /// log log H(psi), psi in (0, pi)
  double loglogH(double psi) const;
  double delta() const { return delta_; }
  double psi_min() const { return psi_min_; }
  /// solved branch: rho(psi) for psi in [psi_min, delta]
  double rho_of_psi(double psi) const;
  const std::vector<std::pair<double, double>>& table() const { return table_; }
  void write_csv(const std::string& path) const;

 private:
  double branch(double psi) const;
  Weight w_;
  double rho_lo_, rho_hi_;
  double delta_ = 0.0, psi_min_ = 0.0;
  double llh_delta_ = 0.0, slope_delta_ = 0.0, c_tail_ = 0.0;
  std::vector<std::pair<double, double>> table_;  // (psi, loglogH), increasing psi
};

/// psi(rho) = Im(log L(i rho) + eps(i rho)) and Re(i rho eps(i rho))
double psi_of_rho(const Weight& w, double rho);
double logH_of_rho(const Weight& w, double rho);

/// smallest A on a log grid in [0.1, 1e4] with loglogH(psi + A/r) <= loglogH(psi) - 3/r at every
/// (psi, r) pair; NaN when none works
double scan_H_decrement(const HProfile& h, const std::vector<double>& psis, const std::vector<double>& rs);

/// L^{-1}(R) on the positive ray by bisection in log rho
double inverse_L(const Weight& w, double R);

}  // namespace resum
