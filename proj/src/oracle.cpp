#include "utm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "utm/error.hpp"
#include "utm/quadrature.hpp"

namespace utm {

namespace {

constexpr double kPi = std::numbers::pi;

// Solves (1 + 2r) y_i − r (y_{i−1} + y_{i+1}) = d_i for the interior nodes;
// boundary contributions are already folded into d.
void thomas(double r, std::vector<double>& d, std::vector<double>& scratch) {
  const std::size_t n = d.size();
  if (n == 0) return;
  scratch.resize(n);
  const double diag = 1.0 + 2.0 * r;
  double denom = diag;
  d[0] /= denom;
  scratch[0] = -r / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag + r * scratch[i - 1];
    scratch[i] = -r / denom;
    d[i] = (d[i] + r * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= scratch[i] * d[i + 1];
}

// θ-scheme on [0, X] with Dirichlet data left(t), right(t).
GridSolution theta_march(const std::function<double(double)>& u0, const std::function<double(double)>& left,
                         const std::function<double(double)>& right, double X, double T, int nx, int nt,
                         const CrankNicolsonOptions& opts) {
  require(nx >= 16 && nt >= 16, "need at least 16 intervals in x and t");
  require(X > 0.0 && std::isfinite(X) && T > 0.0 && std::isfinite(T), "need positive extent and horizon");
  require(opts.startup_steps >= 0 && opts.startup_steps <= nt, "startup steps must lie in [0, nt]");
  require(opts.stride >= 0, "stride must be nonnegative");

  GridSolution sol;
  sol.meta.nx = nx;
  sol.meta.nt = nt;
  sol.meta.dx = X / nx;
  sol.meta.dt = T / nt;
  sol.meta.x_max = X;
  sol.meta.startup_steps = opts.startup_steps;
  for (int i = 0; i <= nx; ++i) sol.x_grid.push_back(i == nx ? X : i * sol.meta.dx);

  std::vector<double> u(nx + 1);
  // Interior nodes take cell averages over [x - dx/2, x + dx/2], each half by
  // 3-point Gauss. A jump landing on a node then starts at its midpoint value
  // instead of one of its one-sided limits, which would cost a full order.
  const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)}, gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double q = sol.meta.dx / 4.0;
  u[0] = u0(0.0);
  u[nx] = u0(X);
  for (int i = 1; i < nx; ++i) {
    double acc = 0.0;
    for (double c : {sol.x_grid[i] - q, sol.x_grid[i] + q})
      for (int k = 0; k < 3; ++k) acc += gw[k] * u0(c + q * gx[k]);
    u[i] = acc / 4.0;
  }
  auto keep = [&](double t) {
    sol.t_grid.push_back(t);
    sol.values.insert(sol.values.end(), u.begin(), u.end());
  };
  keep(0.0);

  const double dx2 = sol.meta.dx * sol.meta.dx;
  std::vector<double> d(nx - 1), scratch;
  // One step of length dt from t to t + dt; theta = 1 is backward Euler.
  auto step = [&](double t, double dt, double theta) {
    const double r = theta * dt / dx2, re = (1.0 - theta) * dt / dx2;
    const double a = left(t + dt), b = right(t + dt);
    for (int i = 1; i < nx; ++i) d[i - 1] = u[i] + re * (u[i - 1] - 2.0 * u[i] + u[i + 1]);
    d.front() += r * a;
    d.back() += r * b;
    thomas(r, d, scratch);
    u[0] = a;
    u[nx] = b;
    for (int i = 1; i < nx; ++i) u[i] = d[i - 1];
  };

  const double dt = sol.meta.dt;
  for (int n = 0; n < nt; ++n) {
    const double t = n * dt;
    if (n < opts.startup_steps) {
      step(t, 0.5 * dt, 1.0);
      // The explicit half never sees the t = 0 boundary values, so corner
      // data are imposed from the first step on.
      step(t + 0.5 * dt, 0.5 * dt, 1.0);
    } else {
      // CN needs the boundary at both levels; at n = 0 the old level holds u0.
      step(t, dt, 0.5);
    }
    const bool last = n + 1 == nt;
    if (last || (opts.stride > 0 && (n + 1) % opts.stride == 0)) keep(last ? T : (n + 1) * dt);
  }
  return sol;
}

std::function<double(double)> clamp_signal(const TimeSignal& s, double T) {
  return [&s, T](double t) { return s(std::min(t, T)); };
}

}  // namespace

std::vector<double> GridSolution::final_values() const {
  const std::size_t n = x_grid.size();
  return std::vector<double>(values.end() - static_cast<std::ptrdiff_t>(n), values.end());
}

double GridSolution::final_at(double x) const {
  require(!x_grid.empty(), "empty grid");
  require(x >= x_grid.front() && x <= x_grid.back(), "point outside the grid");
  const std::size_t last = (t_grid.size() - 1) * x_grid.size();
  const double pos = x / meta.dx;
  std::size_t i = std::min(static_cast<std::size_t>(pos), x_grid.size() - 2);
  const double s = pos - static_cast<double>(i);
  return (1.0 - s) * values[last + i] + s * values[last + i + 1];
}

GridSolution crank_nicolson_interval(const Profile& u0, const TimeSignal& h, double L, double T, int nx, int nt,
                                     const CrankNicolsonOptions& opts) {
  require(L > 0.0, "interval length must be positive");
  require(h.horizon() >= T * (1.0 - 1e-12), "boundary datum horizon must cover [0, T]");
  auto f = [&](double x) { return u0(std::min(x, L)); };
  return theta_march(f, [](double) { return 0.0; }, clamp_signal(h, h.horizon()), L, T, nx, nt, opts);
}

GridSolution crank_nicolson_halfline(const Profile& u0, const TimeSignal& g, double x_max, int nx, int nt,
                                     double T, const CrankNicolsonOptions& opts) {
  require(g.horizon() >= T * (1.0 - 1e-12), "boundary datum horizon must cover [0, T]");
  require(x_max > 0.0, "truncation point must be positive");
  auto f = [&](double x) { return u0(x); };
  auto zero = [](double) { return 0.0; };
  const auto left = clamp_signal(g, g.horizon());
  GridSolution sol = theta_march(f, left, zero, x_max, T, nx, nt, opts);

  CrankNicolsonOptions last_only = opts;
  last_only.stride = 0;
  const GridSolution wide = theta_march(f, left, zero, 2.0 * x_max, T, 2 * nx, nt, last_only);
  const auto a = sol.final_values(), b = wide.final_values();
  double diff = 0.0;
  for (int i = 0; i <= nx; ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  sol.meta.truncation_estimate = diff;
  sol.meta.reliable = diff <= kTruncationFlag && std::abs(u0(x_max)) < 1e-10;
  return sol;
}

double SineSeries::operator()(double x) const {
  double s = 0.0;
  for (int n = 1; n <= terms; ++n) {
    const double kn = n * kPi / L;
    s += coefficients[n - 1] * std::exp(-kn * kn * t) * std::sin(kn * x);
  }
  return s;
}

Profile SineSeries::profile(int n) const {
  require(n >= 2, "need at least two intervals");
  std::vector<double> grid(n + 1), values(n + 1);
  for (int i = 0; i <= n; ++i) {
    grid[i] = i == n ? L : L * i / n;
    values[i] = (*this)(grid[i]);
  }
  return Profile::sampled(Domain::interval(L), std::move(grid), std::move(values), SampleQuadrature::gauss_legendre);
}

std::vector<double> sine_coefficients(const Profile& u0, int count) {
  require(u0.domain().kind == DomainKind::interval, "sine coefficients need an interval profile");
  require(count >= 1, "need at least one coefficient");
  const double L = u0.domain().length;
  const int panels = std::max(64, 2 * count);
  std::vector<double> edges;
  for (int i = 0; i <= panels; ++i) edges.push_back(L * i / panels);
  if (!u0.is_closed_form()) {
    for (double g : u0.grid()) edges.push_back(g);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                edges.end());
  }
  const auto nodes = quad::composite(edges, 16);
  std::vector<double> fx(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) fx[j] = u0(nodes[j].x);
  std::vector<double> b(count, 0.0);
  for (int n = 1; n <= count; ++n) {
    const double kn = n * kPi / L;
    double s = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) s += nodes[j].w * fx[j] * std::sin(kn * nodes[j].x);
    b[n - 1] = 2.0 / L * s;
  }
  return b;
}

SineSeries sine_series_interval(std::vector<double> coefficients, double t, double L) {
  require(L > 0.0 && t >= 0.0, "need L > 0 and t ≥ 0");
  require(!coefficients.empty(), "need at least one coefficient");
  SineSeries s;
  s.coefficients = std::move(coefficients);
  s.t = t;
  s.L = L;
  const int count = static_cast<int>(s.coefficients.size());
  s.terms = count;
  for (int n = 1; n <= count; ++n) {
    const double kn = n * kPi / L;
    if (std::exp(-kn * kn * t) < 1e-16) {
      s.terms = n - 1;
      break;
    }
  }
  if (s.terms == count) {
    // The series was cut by the supplied coefficients, not by the decay.
    // Several trailing coefficients: single ones can vanish by symmetry.
    double last = 0.0;
    for (int n = std::max(0, count - 8); n < count; ++n) last = std::max(last, std::abs(s.coefficients[n]));
    const double tail = last * std::exp(-std::pow(count * kPi / L, 2) * t);
    s.truncation_warning = tail > 1e-12;
  }
  return s;
}

SineSeries sine_series_interval(const Profile& u0, double t, int count) {
  return sine_series_interval(sine_coefficients(u0, count), t, u0.domain().length);
}

double erfc_reference(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc_reference(-x);
  if (x < 2.5) {
    // erf(x) = (2/√π) Σ (−1)^n x^{2n+1} / (n! (2n+1))
    double term = x, sum = x;
    const double x2 = x * x;
    for (int n = 1; n < 200; ++n) {
      term *= -x2 / n;
      const double add = term / (2 * n + 1);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return 1.0 - 2.0 / std::sqrt(kPi) * sum;
  }
  if (x > 27.0) return 0.0;
  // erfc(x) = e^{−x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), by modified Lentz.
  const double tiny = 1e-300;
  double f = x, C = x, D = 0.0;
  for (int n = 1; n < 500; ++n) {
    const double a = 0.5 * n;
    D = x + a * D;
    D = D == 0.0 ? tiny : D;
    C = x + a / C;
    C = C == 0.0 ? tiny : C;
    D = 1.0 / D;
    const double delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) / (std::sqrt(kPi) * f);
}

double halfline_step_response(double x, double t) {
  require(t > 0.0, "need t > 0");
  return erfc_reference(x / (2.0 * std::sqrt(t)));
}

}  // namespace utm
