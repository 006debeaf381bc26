#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "utm/config.hpp"
#include "utm/profile.hpp"
#include "utm/signal.hpp"

namespace utm {

/// u_t = u_xx on ℝ₊, u(x,0) = u0, u(0,t) = g. The Neumann trace r = u_x(0,·)
/// is only known for manufactured solutions.
struct HalfLineProblem {
  HalfLineProblem(Profile u0, TimeSignal g, double T, std::optional<TimeSignal> r = std::nullopt);

  Profile u0;
  TimeSignal g;
  double T;
  std::optional<TimeSignal> r;
};

/// A relation residual in scaled arithmetic. `scaled()` is the residual
/// measured against e^{scale_exponent}, the size of the terms it balances.
struct RelationResidual {
  ScaledComplex value;
  double scale_exponent = 0.0;

  cplx scaled() const;
  double magnitude() const { return std::abs(scaled()); }
};

/// e^{λ²t} û(λ,t) − [û₀(λ) − r̃(λ²,t) − iλ g̃(λ²,t)], Im λ ≤ 0.
RelationResidual global_relation_residual(const HalfLineProblem& p, const Profile& u_t, double t,
                                          cplx lambda);

/// The manufactured family u = e^{a²t − ax}: u0 = e^{−ax}, g = e^{a²t},
/// r = −a e^{a²t}.
HalfLineProblem manufactured_exp_problem(double a, double T);
Profile manufactured_exp_snapshot(double a, double t);

struct SolveResult {
  double value = 0.0;
  double imag = 0.0;  // discarded imaginary part, an error estimate
};

/// u(x,t) from the integral representation: a truncated real-line integral of
/// e^{iλx−λ²t}û₀(λ) and a ∂D+ integral of e^{iλx−λ²t}[2iλ g̃(λ²,t) + û₀(−λ)].
std::vector<SolveResult> solve_profile(const HalfLineProblem& p, std::span<const double> xs, double t,
                                       const ContourConfig& config = {});

double solve(const HalfLineProblem& p, double x, double t, const ContourConfig& config = {});

/// u(x_i, t) for u0 = 0 and g = φ_k, every point and basis function on shared
/// contours. Row-major [point][basis]; points must be positive.
std::vector<double> halfline_response_matrix(std::span<const double> xs, double t, BasisKind basis, int K,
                                             const ContourConfig& config = {});

/// Grid of positive λ values.
struct ScanGrid {
  double lo = 1e-2;
  double hi = 1e2;
  int count = 400;
  bool logarithmic = true;

  std::vector<double> points() const;
  std::string describe() const;
};

enum class Verdict { obstructed, inconclusive };
const char* to_string(Verdict v);

struct CertificateReport {
  double lambda_star = 0.0;
  double gap = 0.0;  // |û₀(λ*) − û₀(−λ*)|
  double M = 0.0;    // max over the scan ∩ {λ² > 1} of |û₀(λ) − û₀(−λ)| / (2λ)
  Verdict verdict = Verdict::inconclusive;
  double tolerance = 1e-10;
  std::string scan;
  std::string interpretation;
};

inline constexpr double kCertificateTol = 1e-10;

/// Searches the scan for a λ with û₀(λ) ≠ û₀(−λ). The grid maximum is refined
/// locally when it falls between two grid points.
CertificateReport obstruction_certificate(const Profile& u0, std::span<const double> scan,
                                          double tolerance = kCertificateTol,
                                          const std::string& scan_description = "");
CertificateReport obstruction_certificate(const Profile& u0, const ScanGrid& scan = {},
                                          double tolerance = kCertificateTol);

/// The same search for any odd-part function λ ↦ û₀(λ) − û₀(−λ).
CertificateReport certificate_from_odd_part(const std::function<cplx(double)>& odd, std::span<const double> scan,
                                            double tolerance = kCertificateTol,
                                            const std::string& scan_description = "");

/// û₀(λ) − û₀(−λ) for real λ.
cplx odd_part_transform(const Profile& u0, double lambda);

enum class GrowthFlag { bounded, unbounded_growth, inconclusive };
const char* to_string(GrowthFlag f);

struct GrowthRow {
  double k = 0.0;  // λ²
  ScaledComplex value;
  double log_abs = 0.0;
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double bound = 0.0;
  GrowthFlag flag = GrowthFlag::inconclusive;
};

inline constexpr double kGrowthSlopeMin = 1e-3;

/// |∫₀^T e^{λ²t} g(t) dt| on a grid of λ² > 1 with a fitted growth rate of
/// its logarithm in λ². A bounded table is what an exact null control would
/// need; any nonzero g grows without bound.
GrowthReport yosida_growth_test(const TimeSignal& g, std::span<const double> k_grid,
                                double bound = std::numeric_limits<double>::infinity());

}  // namespace utm
