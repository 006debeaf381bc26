#pragma once

#include <span>
#include <vector>

#include "utm/profile.hpp"
#include "utm/scaled.hpp"
#include "utm/signal.hpp"

namespace utm {

enum class Validity { lower_half, upper_half, real_line, entire };

const char* to_string(Validity v);

/// True when `lambda` lies in the region (tolerance 0 on the sign of Im λ).
bool in_region(Validity v, cplx lambda);

/// Transform values at spectral points, tagged with the region they are valid in.
class SpectralFunction {
 public:
  SpectralFunction(Validity validity, std::vector<cplx> points, std::vector<cplx> values);

  Validity validity() const { return validity_; }
  const std::vector<cplx>& points() const { return points_; }
  const std::vector<cplx>& values() const { return values_; }
  std::size_t size() const { return points_.size(); }

 private:
  Validity validity_;
  std::vector<cplx> points_;
  std::vector<cplx> values_;
};

/// ∫₀^∞ e^{-iλx} f(x) dx, Im λ ≤ 0.
cplx half_line_fourier(const Profile& f, cplx lambda);

/// ∫₀^L e^{-iλx} f(x) dx, any λ.
cplx interval_fourier(const Profile& f, cplx lambda);

/// Dispatches on the profile's domain.
cplx fourier(const Profile& f, cplx lambda);

/// Samples the profile's transform at every point, checking the validity region.
SpectralFunction sample_fourier(const Profile& f, std::span<const cplx> points);

/// Default threshold on Re(k) t beyond which plain evaluation is refused.
inline constexpr double kOverflowGuard = 600.0;

/// ∫₀^t e^{kτ} f(τ) dτ as a (mantissa, exponent) pair. Callers pass k = λ².
ScaledComplex t_transform_scaled(const TimeSignal& f, cplx k, double t);

/// Plain value of the t-transform; accuracy error when the exponent exceeds
/// `overflow_guard`.
cplx t_transform(const TimeSignal& f, cplx k, double t, double overflow_guard = kOverflowGuard);

}  // namespace utm
