#pragma once

#include <functional>
#include <string>
#include <vector>

#include "utm/profile.hpp"
#include "utm/signal.hpp"

namespace utm {

struct SchemeMeta {
  std::string scheme = "crank_nicolson";
  int nx = 0;  // spatial intervals
  int nt = 0;  // time steps
  double dx = 0.0;
  double dt = 0.0;
  double x_max = 0.0;
  int startup_steps = 0;  // leading CN steps replaced by two backward-Euler half steps
  double truncation_estimate = 0.0;  // half line only
  bool reliable = true;
};

/// Values on uniform grids, row-major [time level][x node]. Only every
/// `stride`-th time level is kept, plus the last.
struct GridSolution {
  std::vector<double> x_grid;
  std::vector<double> t_grid;
  std::vector<double> values;
  SchemeMeta meta;

  std::size_t nx_nodes() const { return x_grid.size(); }
  std::size_t nt_levels() const { return t_grid.size(); }
  double at(std::size_t level, std::size_t node) const { return values[level * x_grid.size() + node]; }
  std::vector<double> final_values() const;
  /// Linear interpolation in x at the final time level.
  double final_at(double x) const;
};

struct CrankNicolsonOptions {
  int startup_steps = 2;
  int stride = 0;  // 0: keep only the first and last levels
};

/// u_t = u_xx on [0, L], u(0,t) = 0, u(L,t) = h(t). Boundary values are
/// imposed from t = Δt on, so u0 need not match them at the corners.
GridSolution crank_nicolson_interval(const Profile& u0, const TimeSignal& h, double L, double T, int nx,
                                     int nt, const CrankNicolsonOptions& opts = {});

/// u_t = u_xx on [0, X_max] with u(0,t) = g(t) and u(X_max,t) = 0. The
/// truncation estimate is the largest difference on [0, X_max] against a run
/// on [0, 2X_max] with the same steps; above 1e-5 the run is flagged.
GridSolution crank_nicolson_halfline(const Profile& u0, const TimeSignal& g, double x_max, int nx, int nt,
                                     double T, const CrankNicolsonOptions& opts = {});

inline constexpr double kTruncationFlag = 1e-5;

/// Σ b_n e^{−(nπ/L)²t} sin(nπx/L), n = 1, 2, ...
struct SineSeries {
  std::vector<double> coefficients;  // b_1, b_2, ...
  double t = 0.0;
  double L = 1.0;
  int terms = 0;  // modes kept after the e^{−(nπ/L)²t} < 1e-16 cutoff
  bool truncation_warning = false;

  double operator()(double x) const;
  /// Samples on a uniform grid of `n` intervals as an interval profile.
  Profile profile(int n = 2000) const;
};

/// b_n = (2/L) ∫₀^L u0(x) sin(nπx/L) dx by composite Gauss–Legendre.
std::vector<double> sine_coefficients(const Profile& u0, int count);

SineSeries sine_series_interval(std::vector<double> coefficients, double t, double L);
SineSeries sine_series_interval(const Profile& u0, double t, int count = 400);

/// Complementary error function by power series (|x| < 2.5) and a continued
/// fraction beyond.
double erfc_reference(double x);

/// erfc(x / (2√t)): u0 = 0, g ≡ 1 on the half line.
double halfline_step_response(double x, double t);

}  // namespace utm
