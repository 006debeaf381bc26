#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "utm/scaled.hpp"

namespace utm {

using Params = std::map<std::string, double>;

enum class DomainKind { half_line, interval };

struct Domain {
  DomainKind kind = DomainKind::half_line;
  double length = 0.0;  // interval only

  static Domain half_line() { return {DomainKind::half_line, 0.0}; }
  static Domain interval(double L);

  bool operator==(const Domain&) const = default;
};

enum class SampleQuadrature { trapezoid, gauss_legendre };

/// A function of one spatial variable on ℝ₊ or [0, L].
///
/// Closed-form profiles come from a fixed registry and have analytic
/// transforms where one exists:
///
///   zero                      0
///   exp_decay     a           e^{-ax}
///   indicator     b           1 on [0, b]
///   gaussian_bump c, w        e^{-((x-c)/w)²}
///   sine_mode     n           sin(nπx/L)           (interval only)
///   poly_exp      a, c0..c9   (Σ c_k x^k) e^{-ax}
///
/// Every entry accepts an optional amplitude `amp` (default 1).
///
/// Sampled profiles carry a strictly increasing grid with real values and are
/// integrated either by the trapezoid rule or by Gauss–Legendre panels over a
/// local cubic interpolant. Half-line samples may carry an exponential decay
/// hint used to extend the tail past the last grid point.
class Profile {
 public:
  static Profile closed_form(Domain domain, const std::string& id, Params params = {});
  static Profile sampled(Domain domain, std::vector<double> grid, std::vector<double> values,
                         SampleQuadrature quadrature = SampleQuadrature::trapezoid,
                         std::optional<double> decay_hint = std::nullopt,
                         double tail_eps = 1e-14);

  static const std::vector<std::string>& registry();

  const Domain& domain() const { return domain_; }
  bool is_closed_form() const { return !samples_; }
  const std::string& id() const { return id_; }
  const Params& params() const { return params_; }

  const std::vector<double>& grid() const;
  const std::vector<double>& values() const;
  SampleQuadrature quadrature() const { return quadrature_; }
  std::optional<double> decay_hint() const { return decay_hint_; }
  double tail_eps() const { return tail_eps_; }

  double operator()(double x) const;

  /// ∫ e^{-iλx} f(x) dx over the domain. No validity-region check; callers
  /// go through half_line_fourier / interval_fourier.
  cplx transform_unchecked(cplx lambda) const;

  /// ∫ x^k f(x) dx over the domain.
  double moment(int k) const;
  double l1_norm() const;
  double l2_norm() const;

  /// True when the profile is identically zero by construction.
  bool is_trivially_zero() const;

  /// Profile with every value multiplied by `s`.
  Profile scaled(double s) const;

 private:
  Profile() = default;

  struct Samples {
    std::vector<double> grid;
    std::vector<double> values;
  };

  double amp() const;
  double param(const std::string& key) const;
  double effective_end() const;
  std::vector<double> breakpoints() const;
  template <class F>
  double integrate(F&& integrand) const;
  cplx gaussian_transform(cplx lambda) const;
  cplx samples_transform(cplx lambda) const;
  double sample_interp(double x) const;

  Domain domain_;
  std::string id_;
  Params params_;
  std::optional<Samples> samples_;
  SampleQuadrature quadrature_ = SampleQuadrature::trapezoid;
  std::optional<double> decay_hint_;
  double tail_eps_ = 1e-14;
};

}  // namespace utm
