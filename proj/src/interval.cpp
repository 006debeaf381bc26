#include "utm/interval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "detail.hpp"
#include "utm/contours.hpp"
#include "utm/error.hpp"
#include "utm/parallel.hpp"
#include "utm/transforms.hpp"

namespace utm {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I{0.0, 1.0};
constexpr double kSeriesRadius = 1e-3;  // |λ|L below which Δ uses its Taylor series
constexpr double kPoleDistance = 1e-8;
constexpr double kMinClearance = 1e-3;

// Δ(λ)/(2iλL) = sin(λL)/(λL) near the origin.
cplx sinc_series(cplx z) {
  const cplx z2 = z * z;
  return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
}

// λ e^{iλx} / Δ(λ) = q · e^{iλ(x − shift)} with |q| bounded on the contours.
struct NodeFactor {
  cplx q;
  double shift;
};

NodeFactor node_factor(cplx lambda, double L) {
  if (std::abs(lambda) * L < kSeriesRadius) return {1.0 / (2.0 * I * L * sinc_series(lambda * L)), 0.0};
  if (lambda.imag() >= 0.0) return {-lambda / (1.0 - std::exp(2.0 * I * lambda * L)), -L};
  return {lambda / (1.0 - std::exp(-2.0 * I * lambda * L)), L};
}

void check_pole(cplx lambda, double L) {
  const double n = std::round(lambda.real() * L / kPi);
  if (n == 0.0) return;
  const double dist = std::abs(lambda - cplx{n * kPi / L, 0.0});
  if (dist < kPoleDistance) {
    std::ostringstream os;
    os << "λ = " << lambda << " lies within " << dist << " of the real zero " << n << "π/L of Δ";
    fail(ErrorKind::pole_proximity, os.str());
  }
}

void check_interval(const Profile& u0) {
  require(u0.domain().kind == DomainKind::interval, "interval problem needs an interval u0");
}

void check_points(std::span<const double> xs, double L) {
  require(!xs.empty(), "need at least one evaluation point");
  for (double x : xs) require(std::isfinite(x) && x > 0.0 && x < L, "evaluation points must lie in (0, L)");
}

double indent_for(const ContourConfig& cfg, double L) {
  const double rho = cfg.indent.value_or(default_indent(L));
  require(rho >= 0.0 && rho < kPi / L, "indentation radius must lie in [0, π/L)");
  return rho;
}

Contour checked_contour(ContourKind kind, const ContourConfig& cfg, double lambda_max, double rho,
                        const Refinement& refine, double L) {
  Contour c = build_contour(kind, cfg.theta, lambda_max, cfg.panels, rho, refine, cfg.order);
  const double clearance = pole_clearance(c, L);
  if (clearance < kMinClearance) {
    std::ostringstream os;
    os << "contour passes within " << clearance << " of a zero of Δ; increase θ or the indentation";
    fail(ErrorKind::pole_proximity, os.str());
  }
  return c;
}

// Signal-independent part of the ∂D± integrals of R: for every point x_i the
// nodes, weights and factors that multiply J(λ) = e^{−λ²T} h̃(λ², T).
struct RPlan {
  struct Group {
    Contour contour;
    std::vector<std::size_t> members;
  };
  std::vector<Group> groups;
};

RPlan make_r_plan(std::span<const double> xs, double T, double L, const ContourConfig& cfg) {
  const double rho = indent_for(cfg, L);
  const double lambda_gauss = gaussian_lambda_max(cfg.theta, T);
  RPlan plan;

  // ∂D+: |e^{iλ(x+L)}| decays at rate (x + L) sin θ ≥ L sin θ.
  {
    Refinement refine;
    refine.oscillation_distance = 2.0 * L;
    refine.chirp_time = T;
    refine.chirp_radius = lambda_gauss;
    refine.inner_radius = std::min(0.25, 0.25 / L);
    const double lam = cfg.lambda_max.value_or(std::max(lambda_gauss, exponential_lambda_max(cfg.theta, L)));
    RPlan::Group g{checked_contour(ContourKind::d_plus, cfg, lam, rho, refine, L), {}};
    for (std::size_t i = 0; i < xs.size(); ++i) g.members.push_back(i);
    plan.groups.push_back(std::move(g));
  }

  // ∂D−: decay rate (L − x) sin θ, slow near the controlled end.
  std::vector<double> dist(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) dist[i] = L - xs[i];
  for (auto& bucket : detail::bucket_by_octave(dist)) {
    Refinement refine;
    refine.oscillation_distance = bucket.hi;
    refine.chirp_time = T;
    refine.chirp_radius = lambda_gauss;
    refine.inner_radius = std::min(0.25, 0.25 / L);
    const double lam =
        cfg.lambda_max.value_or(std::max(lambda_gauss, exponential_lambda_max(cfg.theta, bucket.lo)));
    plan.groups.push_back(
        {checked_contour(ContourKind::d_minus, cfg, lam, rho, refine, L), std::move(bucket.members)});
  }
  return plan;
}

// Σ over both contours of R for m signals at once. `jfun(λ)` returns the m
// values J_k(λ). Output is row-major [point][signal].
std::vector<cplx> apply_r_plan(const RPlan& plan, std::span<const double> xs, double L, std::size_t m,
                               const std::function<std::vector<cplx>(cplx)>& jfun) {
  std::vector<cplx> out(xs.size() * m, cplx{0.0, 0.0});
  for (const auto& group : plan.groups) {
    const Contour& c = group.contour;
    std::vector<cplx> coef(c.size() * m);
    std::vector<double> shift(c.size());
    parallel_for(c.size(), [&](std::size_t j) {
      const NodeFactor f = node_factor(c.nodes[j], L);
      shift[j] = f.shift;
      const std::vector<cplx> J = jfun(c.nodes[j]);
      for (std::size_t k = 0; k < m; ++k) coef[j * m + k] = c.weights[j] * (I / kPi) * f.q * J[k];
    });
    parallel_for(group.members.size(), [&](std::size_t mi) {
      const std::size_t i = group.members[mi];
      for (std::size_t j = 0; j < c.size(); ++j) {
        const cplx e = std::exp(I * c.nodes[j] * (xs[i] - shift[j]));
        for (std::size_t k = 0; k < m; ++k) out[i * m + k] += coef[j * m + k] * e;
      }
    });
  }
  for (const cplx& v : out)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(ErrorKind::accuracy, "non-finite contour integral of R; contour parameters insufficient");
  return out;
}

cplx j_signal(const TimeSignal& h, cplx lambda, double T) {
  const cplx k = lambda * lambda;
  return (t_transform_scaled(h, k, T) * ScaledComplex::from_exp(-k * T)).value();
}

bool is_zero_signal(const TimeSignal& h) { return h.is_closed_form() && h.id() == "zero"; }

}  // namespace

IntervalProblem::IntervalProblem(Profile u0_, TimeSignal h_, double T_)
    : u0(std::move(u0_)), h(std::move(h_)), T(T_) {
  check_interval(u0);
  require(std::isfinite(T) && T > 0.0, "horizon T must be positive");
  require(h.horizon() >= T * (1.0 - 1e-12), "boundary datum horizon must cover [0, T]");
  const double scale = std::max(1.0, std::abs(h(0.0)));
  compatible = std::abs(u0(0.0)) <= 1e-12 * scale && std::abs(u0(L()) - h(0.0)) <= 1e-12 * scale;
}

RelationResidual interval_global_relation_residual(const IntervalProblem& p, const TimeSignal& g1,
                                                   const TimeSignal& h1, const Profile& u_T, cplx lambda) {
  require(g1.horizon() >= p.T * (1.0 - 1e-12) && h1.horizon() >= p.T * (1.0 - 1e-12),
          "Neumann traces must cover [0, T]");
  require(u_T.domain() == p.u0.domain(), "terminal snapshot must live on the same interval");
  const double L = p.L();
  const cplx k = lambda * lambda;
  const ScaledComplex shift = ScaledComplex::from_exp(-I * lambda * L);

  const ScaledComplex terms[] = {
      ScaledComplex{interval_fourier(p.u0, lambda), 0.0},
      (I * lambda) * (shift * t_transform_scaled(p.h, k, p.T)),
      -t_transform_scaled(g1, k, p.T),
      shift * t_transform_scaled(h1, k, p.T),
      -(ScaledComplex::from_exp(k * p.T) * interval_fourier(u_T, lambda)),
  };
  RelationResidual out;
  for (const auto& t : terms) {
    out.value += t;
    if (!t.is_zero()) out.scale_exponent = std::max(out.scale_exponent, t.log_abs());
  }
  return out;
}

cplx evaluate_R(cplx lambda, double x, double T, double L, const TimeSignal& h) {
  require(L > 0.0 && T > 0.0, "need L > 0 and T > 0");
  require(h.horizon() >= T * (1.0 - 1e-12), "boundary datum horizon must cover [0, T]");
  check_pole(lambda, L);
  const NodeFactor f = node_factor(lambda, L);
  return (I / kPi) * f.q * std::exp(I * lambda * (x - f.shift)) * j_signal(h, lambda, T);
}

cplx u0_integrand_plus(cplx lambda, double x, double T, const Profile& u0) {
  check_interval(u0);
  const double L = u0.domain().length;
  check_pole(lambda, L);
  const cplx gauss = std::exp(I * lambda * x - lambda * lambda * T);
  if (lambda == cplx{0.0, 0.0}) return gauss * (u0.moment(0) - u0.moment(1) / L);
  const cplx up = interval_fourier(u0, lambda), um = interval_fourier(u0, -lambda);
  cplx bracket;
  if (std::abs(lambda) * L < kSeriesRadius) {
    bracket = (std::exp(I * lambda * L) * up - std::exp(-I * lambda * L) * um) /
              (2.0 * I * lambda * L * sinc_series(lambda * L));
  } else if (lambda.imag() >= 0.0) {
    const cplx e = std::exp(2.0 * I * lambda * L);
    bracket = (e * up - um) / (e - 1.0);
  } else {
    const cplx e = std::exp(-2.0 * I * lambda * L);
    bracket = (up - e * um) / (1.0 - e);
  }
  return gauss * bracket;
}

cplx u0_integrand_minus(cplx lambda, double x, double T, const Profile& u0) {
  check_interval(u0);
  const double L = u0.domain().length;
  check_pole(lambda, L);
  const cplx k = lambda * lambda;
  if (lambda == cplx{0.0, 0.0}) return -u0.moment(1) / L;
  const cplx odd = interval_fourier(u0, lambda) - interval_fourier(u0, -lambda);
  if (std::abs(lambda) * L < kSeriesRadius)
    return std::exp(-I * lambda * (L - x) - k * T) * odd / (2.0 * I * lambda * L * sinc_series(lambda * L));
  if (lambda.imag() >= 0.0) return std::exp(I * lambda * x - k * T) * odd / (std::exp(2.0 * I * lambda * L) - 1.0);
  return std::exp(I * lambda * (x - 2.0 * L) - k * T) * odd / (1.0 - std::exp(-2.0 * I * lambda * L));
}

std::vector<SolveResult> evaluate_U0_profile(std::span<const double> xs, double T, const Profile& u0,
                                             const ContourConfig& cfg) {
  check_interval(u0);
  const double L = u0.domain().length;
  check_points(xs, L);
  require(std::isfinite(T) && T > 0.0, "horizon T must be positive");
  std::vector<cplx> sums(xs.size(), cplx{0.0, 0.0});

  if (!u0.is_trivially_zero()) {
    const double rho = indent_for(cfg, L);
    Refinement refine;
    refine.oscillation_distance = 2.0 * L;
    refine.chirp_time = T;
    refine.inner_radius = std::min(0.25, 0.25 / L);

    // Every integrand is x-independent up to e^{iλx}: weight · bracket · e^{iλx}.
    struct Piece {
      Contour contour;
      double sign;
      std::function<cplx(cplx)> bracket;
    };
    const double lam_line = cfg.lambda_max.value_or(gaussian_lambda_max(0.0, T));
    const double lam_legs = cfg.lambda_max.value_or(gaussian_lambda_max(cfg.theta, T));
    refine.chirp_radius = lam_legs;
    std::vector<Piece> pieces;
    pieces.push_back({build_real_line(lam_line, cfg.panels, refine, cfg.order), 1.0,
                      [&](cplx z) { return std::exp(-z * z * T) * interval_fourier(u0, z); }});
    pieces.push_back({checked_contour(ContourKind::d_plus, cfg, lam_legs, rho, refine, L), -1.0,
                      [&](cplx z) { return u0_integrand_plus(z, 0.0, T, u0); }});
    pieces.push_back({checked_contour(ContourKind::d_minus, cfg, lam_legs, rho, refine, L), -1.0,
                      [&](cplx z) { return u0_integrand_minus(z, 0.0, T, u0); }});

    for (const auto& piece : pieces) {
      const Contour& c = piece.contour;
      std::vector<cplx> coef(c.size());
      parallel_for(c.size(), [&](std::size_t j) { coef[j] = piece.sign * c.weights[j] * piece.bracket(c.nodes[j]); });
      parallel_for(xs.size(), [&](std::size_t i) {
        cplx s{0.0, 0.0};
        for (std::size_t j = 0; j < c.size(); ++j) s += coef[j] * std::exp(I * c.nodes[j] * xs[i]);
        sums[i] += s;
      });
    }
  }

  std::vector<SolveResult> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const cplx u = sums[i] / (2.0 * kPi);
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag()))
      fail(ErrorKind::accuracy, "non-finite U0 value; contour parameters insufficient");
    out[i] = {u.real(), u.imag()};
  }
  return out;
}

double evaluate_U0(double x, double T, const Profile& u0, const ContourConfig& cfg) {
  const double xs[] = {x};
  return evaluate_U0_profile(xs, T, u0, cfg)[0].value;
}

TerminalProfile terminal_profile(const IntervalProblem& p, std::span<const double> x_grid,
                                 const ContourConfig& cfg) {
  const double L = p.L();
  check_points(x_grid, L);
  const std::vector<SolveResult> known = evaluate_U0_profile(x_grid, p.T, p.u0, cfg);

  std::vector<cplx> forced(x_grid.size(), cplx{0.0, 0.0});
  if (!is_zero_signal(p.h)) {
    const RPlan plan = make_r_plan(x_grid, p.T, L, cfg);
    forced = apply_r_plan(plan, x_grid, L, 1, [&](cplx z) { return std::vector<cplx>{j_signal(p.h, z, p.T)}; });
  }

  TerminalProfile out;
  out.x_grid.assign(x_grid.begin(), x_grid.end());
  out.contour = cfg;
  out.indent = indent_for(cfg, L);
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const cplx u = cplx{known[i].value, known[i].imag} - forced[i];
    if (std::abs(u.imag()) >= kImagFailure) {
      std::ostringstream os;
      os << "imaginary residual " << std::abs(u.imag()) << " at x = " << x_grid[i] << " exceeds "
         << kImagFailure << "; contour parameters insufficient";
      fail(ErrorKind::accuracy, os.str());
    }
    out.values.push_back(u.real());
    out.imag.push_back(u.imag());
  }
  return out;
}

std::vector<double> control_response_matrix(std::span<const double> x_grid, double T, double L,
                                            BasisKind basis, int K, const ContourConfig& cfg,
                                            std::vector<double>* imag) {
  require(L > 0.0 && T > 0.0, "need L > 0 and T > 0");
  require(K >= 1, "basis size must be at least 1");
  check_points(x_grid, L);
  const RPlan plan = make_r_plan(x_grid, T, L, cfg);
  const auto sums = apply_r_plan(plan, x_grid, L, static_cast<std::size_t>(K), [&](cplx z) {
    const cplx k = z * z;
    const ScaledComplex decay = ScaledComplex::from_exp(-k * T);
    std::vector<cplx> J;
    for (const auto& v : basis_t_transforms(basis, K, T, k, T)) J.push_back((v * decay).value());
    return J;
  });
  std::vector<double> out(sums.size());
  if (imag) imag->assign(sums.size(), 0.0);
  for (std::size_t n = 0; n < sums.size(); ++n) {
    out[n] = sums[n].real();
    if (imag) (*imag)[n] = sums[n].imag();
  }
  return out;
}

}  // namespace utm
