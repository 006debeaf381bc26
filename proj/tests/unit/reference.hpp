#pragma once

// Independent reference routines for the unit tests. Nothing here calls into
// the library's quadrature, so agreement is a genuine cross-check.

#include <cmath>
#include <complex>
#include <functional>

namespace ref {

using cplx = std::complex<double>;

// Composite Simpson with n (even) subintervals.
inline cplx simpson(const std::function<cplx(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  cplx s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * (h / 3.0);
}

// Richardson-extrapolated Simpson: (16 S_{2n} - S_n) / 15.
inline cplx simpson_extrapolated(const std::function<cplx(double)>& f, double a, double b, int n) {
  const cplx s1 = simpson(f, a, b, n), s2 = simpson(f, a, b, 2 * n);
  return (16.0 * s2 - s1) / 15.0;
}

// Integral along the straight segment z0 -> z1.
inline cplx segment(const std::function<cplx(cplx)>& f, cplx z0, cplx z1, int n) {
  const cplx dz = z1 - z0;
  return simpson_extrapolated([&](double s) { return f(z0 + s * dz); }, 0.0, 1.0, n) * dz;
}

inline double erfc(double x) { return std::erfc(x); }

}  // namespace ref
