#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "utm/config.hpp"
#include "utm/halfline.hpp"
#include "utm/interval.hpp"

namespace utm {

/// Relative Tikhonov weight: μ = kTikhonovRelative · ‖A‖₂² unless given.
inline constexpr double kTikhonovRelative = 1e-10;
inline constexpr int kNormGridPoints = 201;
inline constexpr int kDefaultCollocation = 48;
inline constexpr double kHalfLineNormExtent = 12.0;

/// n Chebyshev points strictly inside (0, L).
std::vector<double> chebyshev_points(int n, double L);

/// Uniform grid of kNormGridPoints points on [0, X].
std::vector<double> norm_grid(double X);

/// Trapezoid L² norm of samples on a uniform grid.
double trapezoid_norm(std::span<const double> values, double X);

/// ‖u(·,T)‖₂ on the 201-point grid of [0, L]; the end values are 0 and h(T).
double interval_terminal_norm(const IntervalProblem& p, const ContourConfig& config = {});

/// ‖u(·,T)‖₂ on the 201-point grid of [0, X]; u(0,T) = g(T).
double halfline_terminal_norm(const HalfLineProblem& p, double X = kHalfLineNormExtent,
                              const ContourConfig& config = {});

struct HistoryEntry {
  int K = 0;
  double collocation_residual = 0.0;  // ‖A c − U₀‖ on the collocation grid
  double objective = 0.0;             // ‖A c − U₀‖² + μ‖c‖²
};

struct ControlSolution {
  BasisKind basis = BasisKind::legendre;
  double T = 0.0;
  double L = 0.0;
  std::vector<double> coefficients;
  double terminal_rel_norm = 0.0;
  double terminal_norm = 0.0;
  double u0_norm = 0.0;
  std::vector<HistoryEntry> residual_history;
  double regularization = 0.0;
  std::vector<double> collocation;

  TimeSignal control() const { return TimeSignal::basis(T, basis, coefficients); }
};

struct SynthesisOptions {
  int K = 12;
  std::optional<double> mu;  // absolute weight; default kTikhonovRelative · ‖A‖₂²
  std::vector<double> collocation;  // default: kDefaultCollocation Chebyshev points
  BasisKind basis = BasisKind::legendre;
  std::vector<int> history_sizes;  // nested sizes to record besides K
  ContourConfig contour;
};

/// Least-squares h = Σ c_k φ_k with A c ≈ U₀ on the collocation points,
/// where A[j,k] is the R-integral response of u(x_j, T) to φ_k. Solved by QR
/// of [A; √μ I]. The terminal norm is recomputed from the full representation.
ControlSolution synthesize_interval_control(const Profile& u0, double T, const SynthesisOptions& opts = {});

struct AttemptOptions {
  std::vector<int> K_scan{2, 4, 8, 16};
  std::optional<double> mu;
  BasisKind basis = BasisKind::legendre;
  double extent = kHalfLineNormExtent;  // x-grid [0, X] of the objective
  std::vector<double> growth_grid;      // λ² values; default 40 points on (1, 40]
  ContourConfig contour;
};

struct DichotomyRow {
  int K = 0;
  double best_terminal_rel_norm = 0.0;
  double control_norm = 0.0;  // ‖g*‖₂
  GrowthFlag growth = GrowthFlag::inconclusive;
  double growth_slope = 0.0;
  double max_transform = 0.0;  // max |g̃*(λ², T)| over the growth grid
  std::vector<double> coefficients;
};

struct DichotomyReport {
  std::string problem_kind = "half_line";
  double T = 0.0;
  BasisKind basis = BasisKind::legendre;
  std::vector<DichotomyRow> rows;
  double baseline_rel_norm = 0.0;  // g ≡ 0
  double regularization_relative = kTikhonovRelative;
  int evaluations = 0;  // forward solves used
  CertificateReport certificate;
  std::string verdict_text;
};

/// For each K, minimizes ‖u(·,T)‖₂ over g in the K-dimensional basis by
/// least squares over the basis responses on a fixed grid, then runs the
/// growth test on each minimizer. Refuses u0 without an obstruction witness.
DichotomyReport attempt_halfline_control(const Profile& u0, double T, const AttemptOptions& opts = {});

struct SubtractionReport {
  double max_residual = 0.0;      // may be +inf when the residual overflows
  double max_log_residual = 0.0;  // log of the same, always finite for nonzero residuals
  double lambda_at_max = 0.0;
};

/// max over the grid of |2iλ g̃(λ², T) − (û₀(λ) − û₀(−λ))|.
SubtractionReport verify_subtraction_identity(const Profile& u0, const TimeSignal& g, double T,
                                              std::span<const double> lambda_grid);

}  // namespace utm
