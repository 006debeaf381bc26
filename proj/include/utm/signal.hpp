#pragma once

#include <string>
#include <vector>

#include "utm/profile.hpp"
#include "utm/scaled.hpp"

namespace utm {

enum class BasisKind { piecewise_constant, legendre, sine };

const char* to_string(BasisKind kind);
BasisKind basis_from_string(const std::string& name);

/// A boundary function of t on [0, T].
///
/// Closed forms: zero, const(c), exp(c, b) = c e^{bt}, sine(c, w) = c sin(wt).
/// Basis expansions on [0, T]:
///   piecewise_constant(K)  indicators of [jT/K, (j+1)T/K)
///   legendre(K)            P_m(2t/T - 1), m < K
///   sine(K)                sin((m+1)πt/T), m < K
class TimeSignal {
 public:
  static TimeSignal closed_form(double horizon, const std::string& id, Params params = {});
  static TimeSignal basis(double horizon, BasisKind kind, std::vector<double> coefficients);
  static TimeSignal zero(double horizon) { return closed_form(horizon, "zero"); }

  static const std::vector<std::string>& registry();

  double horizon() const { return horizon_; }
  bool is_closed_form() const { return closed_; }
  const std::string& id() const { return id_; }
  const Params& params() const { return params_; }
  BasisKind basis_kind() const { return basis_kind_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  double operator()(double t) const;
  double l2_norm() const;

  /// ∫₀^t e^{kτ} f(τ) dτ in scaled form.
  ScaledComplex t_transform(cplx k, double t) const;

 private:
  TimeSignal() = default;
  double param(const std::string& key) const;

  double horizon_ = 0.0;
  bool closed_ = true;
  std::string id_;
  Params params_;
  BasisKind basis_kind_ = BasisKind::legendre;
  std::vector<double> coefficients_;
};

/// Value of basis function m at t.
double basis_value(BasisKind kind, int K, double horizon, int m, double t);

/// ∫₀^t e^{kτ} φ_m(τ) dτ for every basis function m < K, sharing one exponent.
std::vector<ScaledComplex> basis_t_transforms(BasisKind kind, int K, double horizon, cplx k,
                                              double t);

}  // namespace utm
