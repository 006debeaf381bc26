#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace utm {

using cplx = std::complex<double>;

/// A complex number stored as mantissa * exp(exponent).
///
/// Used wherever e^{λ²t} appears: at large λ² the plain value overflows long
/// before the quantities it multiplies become negligible.
struct ScaledComplex {
  cplx mantissa{0.0, 0.0};
  double exponent = 0.0;

  static ScaledComplex from_exp(cplx z) {
    return {std::polar(1.0, z.imag()), z.real()};
  }

  bool is_zero() const { return mantissa == cplx{0.0, 0.0}; }

  /// log|value|; -inf for zero.
  double log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(mantissa)) + exponent;
  }

  cplx value() const {
    if (is_zero()) return {0.0, 0.0};
    return mantissa * std::exp(exponent);
  }

  bool finite() const {
    return std::isfinite(mantissa.real()) && std::isfinite(mantissa.imag()) &&
           std::isfinite(exponent);
  }

  /// Pulls |mantissa| into the exponent so that |mantissa| is 1 (or 0).
  ScaledComplex normalized() const {
    if (is_zero()) return {};
    const double m = std::abs(mantissa);
    return {mantissa / m, exponent + std::log(m)};
  }
};

inline ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
  return {a.mantissa * b.mantissa, a.exponent + b.exponent};
}

inline ScaledComplex operator*(const ScaledComplex& a, cplx s) {
  return {a.mantissa * s, a.exponent};
}

inline ScaledComplex operator*(cplx s, const ScaledComplex& a) { return a * s; }

inline ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.exponent >= b.exponent)
    return {a.mantissa + b.mantissa * std::exp(b.exponent - a.exponent), a.exponent};
  return {b.mantissa + a.mantissa * std::exp(a.exponent - b.exponent), b.exponent};
}

inline ScaledComplex operator-(const ScaledComplex& a) { return {-a.mantissa, a.exponent}; }

inline ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) {
  return a + (-b);
}

inline ScaledComplex& operator+=(ScaledComplex& a, const ScaledComplex& b) {
  a = a + b;
  return a;
}

}  // namespace utm
