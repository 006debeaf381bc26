#pragma once

#include "utm/scaled.hpp"

namespace utm::special {

/// (1 - e^{-z}) / z, with the removable point z = 0 handled by series.
cplx phi1(cplx z);

/// ∫₀¹ u^k e^{-z u} du for integer k ≥ 0.
cplx monomial_exp_moment(int k, cplx z);

/// ∫₀^t e^{sτ} dτ in scaled form; the exponent is max(0, Re(s) t).
ScaledComplex exp_integral(cplx s, double t);

}  // namespace utm::special
