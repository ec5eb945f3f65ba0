#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace resum {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ErrorCode {
  invalid_weight,
  fast_growth,
  domain,
  divergent_integral,
  config,
  saddle_failure,
  below_threshold,
  truncation_failure,
  quadrature,
  divergent_integrand,
  precondition,
  insufficient_data,
  construction_incomplete,
  io,
  usage
};

const char* error_code_name(ErrorCode c);

class ResumError : public std::runtime_error {
 public:
  ResumError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// log(e^a + e^b) without overflow.
inline double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

/// Complex number kept as log|z| and arg z.
struct LogValue {
  double log_mag = -kInf;
  double phase = 0.0;

  static LogValue from(cplx z) {
    if (z == cplx(0.0)) return {};
    return {std::log(std::abs(z)), std::arg(z)};
  }
  static LogValue from_log(cplx lz) { return {lz.real(), std::remainder(lz.imag(), 2 * kPi)}; }
  cplx value() const { return log_mag == -kInf ? cplx(0.0) : std::polar(std::exp(log_mag), phase); }
  cplx log() const { return {log_mag, phase}; }
  bool is_zero() const { return log_mag == -kInf; }
};

/// Complex log Gamma, continuous branch on C \ (-inf, 0].
cplx lgamma_c(cplx s);
/// Complex digamma.
cplx digamma_c(cplx s);
/// Complex trigamma.
cplx trigamma_c(cplx s);

}  // namespace resum
