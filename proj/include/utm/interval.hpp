#pragma once

#include <span>
#include <vector>

#include "utm/config.hpp"
#include "utm/halfline.hpp"
#include "utm/profile.hpp"
#include "utm/signal.hpp"

namespace utm {

/// u_t = u_xx on (0, L), u(0,t) = 0, u(L,t) = h(t), u(x,0) = u0(x).
struct IntervalProblem {
  IntervalProblem(Profile u0, TimeSignal h, double T);

  double L() const { return u0.domain().length; }

  Profile u0;
  TimeSignal h;
  double T;
  bool compatible = false;  // u0(0) = 0 and u0(L) = h(0)
};

/// [û₀(λ) + iλe^{−iλL}h̃(λ²,T) − g̃₁(λ²,T) + e^{−iλL}h̃₁(λ²,T)] − e^{λ²T}û_T(λ).
/// Entire in λ. `g1` = u_x(0,·), `h1` = u_x(L,·).
RelationResidual interval_global_relation_residual(const IntervalProblem& p, const TimeSignal& g1,
                                                   const TimeSignal& h1, const Profile& u_T, cplx lambda);

/// R(λ; x, T, L) = (i/π) λ e^{iλx−λ²T} / (e^{iλL} − e^{−iλL}) · ∫₀^T e^{λ²s} h(s) ds.
cplx evaluate_R(cplx lambda, double x, double T, double L, const TimeSignal& h);

/// The known term U₀(x; T): real-line integral of e^{iλx−λ²T}û₀(λ) minus the
/// ∂D+ and ∂D− integrals that carry û₀(±λ).
double evaluate_U0(double x, double T, const Profile& u0, const ContourConfig& config = {});
std::vector<SolveResult> evaluate_U0_profile(std::span<const double> xs, double T, const Profile& u0,
                                             const ContourConfig& config = {});

/// The ∂D+ and ∂D− integrands of U₀ (without the −1/2π factor).
cplx u0_integrand_plus(cplx lambda, double x, double T, const Profile& u0);
cplx u0_integrand_minus(cplx lambda, double x, double T, const Profile& u0);

struct TerminalProfile {
  std::vector<double> x_grid;
  std::vector<double> values;
  std::vector<double> imag;  // discarded imaginary parts
  ContourConfig contour;
  double indent = 0.0;
};

/// u(x, T) = U₀(x; T) − ∫_{∂D+} R dλ − ∫_{∂D−} R dλ on interior points.
TerminalProfile terminal_profile(const IntervalProblem& p, std::span<const double> x_grid,
                                 const ContourConfig& config = {});

/// (∫_{∂D+} + ∫_{∂D−}) R(λ; x_i, T, L, φ_k) dλ for every point and basis function:
/// the response of u(x_i, T) to a unit coefficient on φ_k. Row-major
/// [point][basis]; the imaginary parts are returned in `imag` when non-null.
std::vector<double> control_response_matrix(std::span<const double> x_grid, double T, double L,
                                            BasisKind basis, int K, const ContourConfig& config = {},
                                            std::vector<double>* imag = nullptr);

}  // namespace utm
