#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "utm/error.hpp"
#include "utm/scaled.hpp"

namespace utm {

/// ∂D+ and ∂D−: boundaries of {Re λ² < 0} in the upper / lower half plane,
/// deformed to legs at angle θ from the real axis. `real_line` is the
/// truncated segment [-Λ, Λ] traversed left to right.
enum class ContourKind { d_plus, d_minus, real_line };

const char* to_string(ContourKind kind);

inline constexpr double kDefaultTheta = std::numbers::pi / 8.0;
inline constexpr int kDefaultPanels = 8;
inline constexpr int kDefaultOrder = 16;

/// Optional panel subdivision on top of the geometric grading.
///
/// `oscillation_distance` d bounds the panel length by c / (cos θ · d), the
/// phase rate of e^{iλd} along a leg. `chirp_time` t and `chirp_radius` R bound
/// it by c / (2 r sin 2θ · t) for r ≤ R, the phase rate of e^{-λ²t}.
/// `inner_radius` makes the geometric grading reach down to that radius even
/// when `panels_per_leg` alone would not.
struct Refinement {
  double oscillation_distance = 0.0;
  double chirp_time = 0.0;
  double chirp_radius = 0.0;
  double inner_radius = 0.0;
  double phase_per_panel = 3.0;
};

struct Contour {
  ContourKind kind = ContourKind::d_plus;
  double theta = kDefaultTheta;
  double lambda_max = 0.0;
  double indent = 0.0;
  int orientation = 1;  // +1: as built; -1: reversed relative to conj(∂D+)
  std::vector<cplx> nodes;
  std::vector<cplx> weights;  // quadrature weight × dλ/ds

  std::size_t size() const { return nodes.size(); }
};

/// Gauss–Legendre panels on each leg, geometrically graded toward the origin
/// (panel edges at Λ·2^{-j}). ∂D+ runs in along arg λ = π−θ and out along
/// arg λ = θ; ∂D− is its point reflection λ ↦ −λ, equal node-by-node to the
/// complex conjugate of ∂D+ with reversed weights. With indent ρ > 0 an arc of
/// radius ρ on the far side of the origin from the real axis replaces the
/// corner.
Contour build_contour(ContourKind kind, double theta, double lambda_max, int panels_per_leg,
                      double indent = 0.0, const Refinement& refine = {},
                      int order = kDefaultOrder);

/// [-Λ, Λ] with panels graded toward 0.
Contour build_real_line(double lambda_max, int panels_per_half, const Refinement& refine = {},
                        int order = kDefaultOrder);

/// Smallest distance from a node to the real zeros nπ/L, n ≠ 0.
double pole_clearance(const Contour& c, double L);

/// Σ weights · integrand(nodes). Reports the offending λ on a non-finite value.
template <class F>
cplx contour_integrate(const Contour& c, F&& integrand) {
  cplx sum{0.0, 0.0};
  for (std::size_t j = 0; j < c.nodes.size(); ++j) {
    const cplx v = integrand(c.nodes[j]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << "non-finite integrand value at λ = " << c.nodes[j] << " on " << to_string(c.kind);
      fail(ErrorKind::accuracy, os.str());
    }
    sum += c.weights[j] * v;
  }
  return sum;
}

/// Λ so that e^{-Λ² t cos 2θ} is below double-precision noise.
double gaussian_lambda_max(double theta, double t);

/// Λ so that e^{-Λ sin θ · d} is below double-precision noise.
double exponential_lambda_max(double theta, double distance);

}  // namespace utm
