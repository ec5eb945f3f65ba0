#pragma once

#include <functional>
#include <string>
#include <vector>

#include "resum/common.hpp"

namespace resum {

struct QuadResult {
  cplx value = 0.0;
  double abs_err = 0.0;
  double l1 = 0.0;  // integral of |f|, used as a cancellation gauge
  int evals = 0;
  bool converged = true;
};

using CFun = std::function<cplx(double)>;

enum class TailPolicy { asymptotic_K, hard_cutoff };

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;  // floor on absolute error, in units of the integrand peak
  int max_subdiv = 2000;
  TailPolicy tail = TailPolicy::asymptotic_K;
  std::string hash() const;
};

/// One Gauss-Kronrod 10/21 panel on [a, b].
QuadResult gk21(const CFun& f, double a, double b);

/// Globally adaptive GK21; stops when err <= max(abs_tol, rel_tol*|I|).
QuadResult integrate_adaptive(const CFun& f, double a, double b, double abs_tol, double rel_tol,
                              int max_panels = 2000);

/// Gauss-Legendre nodes and weights on [-1, 1] (cached per order).
struct Rule {
  std::vector<double> x, w;
};
const Rule& gauss_legendre(int n);

/// Clenshaw-Curtis nodes (cos k pi / n, k = 0..n) and weights on [-1, 1].
Rule clenshaw_curtis(int n);

}  // namespace resum
