#include "utm/special.hpp"

#include <cmath>

namespace utm::special {

cplx phi1(cplx z) {
  if (std::abs(z) < 0.5) {
    // Σ (-z)^m / (m+1)!
    cplx term{1.0, 0.0}, sum{1.0, 0.0};
    for (int m = 1; m < 30; ++m) {
      term *= -z / static_cast<double>(m + 1);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return (1.0 - std::exp(-z)) / z;
}

cplx monomial_exp_moment(int k, cplx z) {
  if (k == 0) return phi1(z);
  const double az = std::abs(z);
  if (az < 2.0) {
    // Σ (-z)^m / (m! (k+m+1))
    cplx term{1.0, 0.0};
    cplx sum = 1.0 / static_cast<double>(k + 1);
    for (int m = 1; m < 80; ++m) {
      term *= -z / static_cast<double>(m);
      const cplx add = term / static_cast<double>(k + m + 1);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  // k!/z^{k+1} (1 - e^{-z} Σ_{j≤k} z^j/j!)
  cplx partial{1.0, 0.0}, term{1.0, 0.0};
  double fact = 1.0;
  for (int j = 1; j <= k; ++j) {
    term *= z / static_cast<double>(j);
    partial += term;
    fact *= j;
  }
  return fact * (1.0 - std::exp(-z) * partial) / std::pow(z, k + 1);
}

ScaledComplex exp_integral(cplx s, double t) {
  if (t <= 0.0) return {};
  const cplx st = s * t;
  if (st.real() > 0.0) {
    // e^{st} t (1 - e^{-st}) / (st)
    return {t * phi1(st) * std::polar(1.0, st.imag()), st.real()};
  }
  return {t * phi1(-st), 0.0};
}

}  // namespace utm::special
