#include "resum/common.hpp"

namespace resum {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_weight: return "invalid-weight";
    case ErrorCode::fast_growth: return "fast-growth";
    case ErrorCode::domain: return "domain";
    case ErrorCode::divergent_integral: return "divergent-integral";
    case ErrorCode::config: return "config";
    case ErrorCode::saddle_failure: return "saddle-failure";
    case ErrorCode::below_threshold: return "below-threshold";
    case ErrorCode::truncation_failure: return "truncation-failure";
    case ErrorCode::quadrature: return "quadrature";
    case ErrorCode::divergent_integrand: return "divergent-integrand";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::construction_incomplete: return "construction-incomplete";
    case ErrorCode::io: return "io";
    case ErrorCode::usage: return "usage";
  }
  return "unknown";
}

namespace {

// Shift needed so that the asymptotic series is accurate to double precision.
int shift_for(cplx s) {
  const double lim = 15.0;
  if (std::abs(s) >= 40.0 && std::abs(std::arg(s)) < 0.9 * kPi) return 0;
  if (s.real() >= lim) return 0;
  if (std::abs(s.imag()) >= lim && s.real() >= 0.0) return 0;
  return static_cast<int>(std::ceil(lim - s.real()));
}

cplx lgamma_stirling(cplx s) {
  static const double c[] = {1.0 / 12,        -1.0 / 360,  1.0 / 1260, -1.0 / 1680,
                             1.0 / 1188,      -691.0 / 360360, 1.0 / 156};
  cplx inv = 1.0 / s, inv2 = inv * inv, term = inv, sum = 0.0;
  for (double ck : c) {
    sum += ck * term;
    term *= inv2;
  }
  return (s - 0.5) * std::log(s) - s + 0.5 * std::log(2 * kPi) + sum;
}

}  // namespace

cplx lgamma_c(cplx s) {
  if (s.real() < 0.0 && std::abs(s) >= 40.0 && std::abs(std::arg(s)) >= 0.9 * kPi) {
    // reflection; branch is only fixed modulo 2πi
    return std::log(kPi) - std::log(std::sin(kPi * s)) - lgamma_c(1.0 - s);
  }
  int n = shift_for(s);
  cplx acc = 0.0;
  for (int k = 0; k < n; ++k) acc += std::log(s + double(k));
  return lgamma_stirling(s + double(n)) - acc;
}

cplx digamma_c(cplx s) {
  if (s.real() < 0.0 && std::abs(s) >= 40.0 && std::abs(std::arg(s)) >= 0.9 * kPi)
    return digamma_c(1.0 - s) - kPi / std::tan(kPi * s);
  int n = shift_for(s);
  cplx acc = 0.0;
  for (int k = 0; k < n; ++k) acc += 1.0 / (s + double(k));
  cplx w = s + double(n);
  static const double c[] = {-1.0 / 12, 1.0 / 120, -1.0 / 252, 1.0 / 240,
                             -1.0 / 132, 691.0 / 32760, -1.0 / 12};
  cplx inv2 = 1.0 / (w * w), term = inv2, sum = 0.0;
  for (double ck : c) {
    sum += ck * term;
    term *= inv2;
  }
  return std::log(w) - 0.5 / w + sum - acc;
}

cplx trigamma_c(cplx s) {
  if (s.real() < 0.0 && std::abs(s) >= 40.0 && std::abs(std::arg(s)) >= 0.9 * kPi) {
    cplx sn = std::sin(kPi * s);
    return -trigamma_c(1.0 - s) + kPi * kPi / (sn * sn);
  }
  int n = shift_for(s);
  cplx acc = 0.0;
  for (int k = 0; k < n; ++k) acc += 1.0 / ((s + double(k)) * (s + double(k)));
  cplx w = s + double(n);
  static const double c[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30,
                             5.0 / 66, -691.0 / 2730, 7.0 / 6};
  cplx inv = 1.0 / w, inv2 = inv * inv, term = inv2 * inv, sum = 0.0;
  for (double ck : c) {
    sum += ck * term;
    term *= inv2;
  }
  return inv + 0.5 * inv2 + sum + acc;
}

}  // namespace resum
