#include "utm/transforms.hpp"

#include <cmath>
#include <sstream>

#include "utm/error.hpp"

namespace utm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::domain: return "domain_violation";
    case ErrorKind::horizon: return "horizon";
    case ErrorKind::truncation: return "truncation_unreliable";
    case ErrorKind::pole_proximity: return "pole_proximity";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::rank_collapse: return "rank_collapse";
    case ErrorKind::certificate: return "certificate";
  }
  return "unknown";
}

const char* to_string(Validity v) {
  switch (v) {
    case Validity::lower_half: return "lower_half";
    case Validity::upper_half: return "upper_half";
    case Validity::real_line: return "real_line";
    case Validity::entire: return "entire";
  }
  return "?";
}

bool in_region(Validity v, cplx lambda) {
  switch (v) {
    case Validity::lower_half: return lambda.imag() <= 0.0;
    case Validity::upper_half: return lambda.imag() >= 0.0;
    case Validity::real_line: return lambda.imag() == 0.0;
    case Validity::entire: return true;
  }
  return false;
}

SpectralFunction::SpectralFunction(Validity validity, std::vector<cplx> points, std::vector<cplx> values)
    : validity_(validity), points_(std::move(points)), values_(std::move(values)) {
  require(points_.size() == values_.size(), "spectral points and values must have equal length");
  for (const cplx& p : points_) {
    if (!in_region(validity_, p)) {
      std::ostringstream os;
      os << "spectral point " << p << " outside validity region " << to_string(validity_);
      fail(ErrorKind::domain, os.str());
    }
  }
}

cplx half_line_fourier(const Profile& f, cplx lambda) {
  require(f.domain().kind == DomainKind::half_line, "half_line_fourier needs a half-line profile");
  if (lambda.imag() > 0.0) {
    std::ostringstream os;
    os << "half-line transform requires Im λ ≤ 0, got λ = " << lambda;
    fail(ErrorKind::domain, os.str());
  }
  return f.transform_unchecked(lambda);
}

cplx interval_fourier(const Profile& f, cplx lambda) {
  require(f.domain().kind == DomainKind::interval, "interval_fourier needs an interval profile");
  return f.transform_unchecked(lambda);
}

cplx fourier(const Profile& f, cplx lambda) {
  return f.domain().kind == DomainKind::half_line ? half_line_fourier(f, lambda)
                                                  : interval_fourier(f, lambda);
}

SpectralFunction sample_fourier(const Profile& f, std::span<const cplx> points) {
  const Validity v = f.domain().kind == DomainKind::half_line ? Validity::lower_half : Validity::entire;
  std::vector<cplx> pts(points.begin(), points.end());
  std::vector<cplx> values;
  values.reserve(pts.size());
  for (const cplx& p : pts) values.push_back(fourier(f, p));
  return SpectralFunction(v, std::move(pts), std::move(values));
}

ScaledComplex t_transform_scaled(const TimeSignal& f, cplx k, double t) {
  if (!(t > 0.0)) {
    if (t == 0.0) return {};
    fail(ErrorKind::validation, "t-transform requires t ≥ 0");
  }
  return f.t_transform(k, t);
}

cplx t_transform(const TimeSignal& f, cplx k, double t, double overflow_guard) {
  const ScaledComplex s = t_transform_scaled(f, k, t);
  if (s.exponent > overflow_guard)
    fail(ErrorKind::accuracy, "t-transform overflows plain arithmetic; use the scaled form");
  return s.value();
}

}  // namespace utm
