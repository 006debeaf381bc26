#include "utm/halfline.hpp"

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

double golden_max(auto&& f, double a, double b, int iterations = 120) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iterations && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++it) {
    if (fc >= fd) {
      b = d, d = c, fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

// Argmax over `pts` of f, refined between the neighbouring grid points when
// the maximum is interior.
std::pair<double, double> refined_max(auto&& f, const std::vector<double>& pts) {
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const double v = f(pts[j]);
    if (v > best_value) best_value = v, best = j;
  }
  if (best > 0 && best + 1 < pts.size()) {
    const double a = pts[best - 1], b = pts[best + 1];
    double x = golden_max(f, a, b);
    double v = f(x);
    // Golden section stalls near sqrt(eps) on a flat maximum; a few
    // central-difference parabola steps take smooth maxima to ~1e-11.
    for (int it = 0; it < 3; ++it) {
      const double h = 1e-5 * std::max(1.0, std::abs(x));
      const double fm = f(x - h), fp = f(x + h);
      const double curv = fp - 2.0 * v + fm;
      if (!(curv < 0.0)) break;
      const double step = -0.5 * h * (fp - fm) / curv;
      if (std::abs(step) > h) break;
      const double xn = x + step;
      const double vn = f(xn);
      if (xn <= a || xn >= b || vn < v) break;
      x = xn, v = vn;
    }
    if (v > best_value) return {x, v};
  }
  return {pts[best], best_value};
}

}  // namespace

HalfLineProblem::HalfLineProblem(Profile u0_, TimeSignal g_, double T_, std::optional<TimeSignal> r_)
    : u0(std::move(u0_)), g(std::move(g_)), T(T_), r(std::move(r_)) {
  require(u0.domain().kind == DomainKind::half_line, "half-line problem needs a half-line u0");
  require(std::isfinite(T) && T > 0.0, "horizon T must be positive");
  require(g.horizon() >= T * (1.0 - 1e-12), "Dirichlet datum horizon must cover [0, T]");
  if (r) require(r->horizon() >= T * (1.0 - 1e-12), "Neumann trace horizon must cover [0, T]");
  require(std::isfinite(u0.l1_norm()) && std::isfinite(u0.l2_norm()),
          "u0 must have finite L1 and L2 norms");
}

cplx RelationResidual::scaled() const {
  if (value.is_zero()) return {0.0, 0.0};
  return value.mantissa * std::exp(value.exponent - scale_exponent);
}

RelationResidual global_relation_residual(const HalfLineProblem& p, const Profile& u_t, double t,
                                          cplx lambda) {
  if (!p.r) fail(ErrorKind::validation, "global relation residual needs the Neumann trace r");
  require(t > 0.0 && t <= p.T * (1.0 + 1e-12), "time must lie in (0, T]");
  if (lambda.imag() > 0.0) fail(ErrorKind::domain, "global relation holds for Im λ ≤ 0");

  const cplx k = lambda * lambda;
  const ScaledComplex lhs = ScaledComplex::from_exp(k * t) * half_line_fourier(u_t, lambda);
  const ScaledComplex u0_hat{half_line_fourier(p.u0, lambda), 0.0};
  const ScaledComplex r_tilde = t_transform_scaled(*p.r, k, t);
  const ScaledComplex g_tilde = t_transform_scaled(p.g, k, t);

  RelationResidual out;
  out.value = lhs - (u0_hat - r_tilde - (I * lambda) * g_tilde);
  out.scale_exponent = std::max(0.0, (k * t).real());
  return out;
}

HalfLineProblem manufactured_exp_problem(double a, double T) {
  require(a > 0.0, "manufactured family needs a > 0");
  return HalfLineProblem(Profile::closed_form(Domain::half_line(), "exp_decay", {{"a", a}}),
                         TimeSignal::closed_form(T, "exp", {{"c", 1.0}, {"b", a * a}}), T,
                         TimeSignal::closed_form(T, "exp", {{"c", -a}, {"b", a * a}}));
}

Profile manufactured_exp_snapshot(double a, double t) {
  return Profile::closed_form(Domain::half_line(), "exp_decay", {{"a", a}, {"amp", std::exp(a * a * t)}});
}

std::vector<SolveResult> solve_profile(const HalfLineProblem& p, std::span<const double> xs, double t,
                                       const ContourConfig& cfg) {
  require(!xs.empty(), "need at least one evaluation point");
  for (double x : xs) require(std::isfinite(x) && x > 0.0, "solve requires x > 0");
  require(t > 0.0, "solve requires t > 0");
  if (t > p.T * (1.0 + 1e-12)) fail(ErrorKind::horizon, "solve requires t ≤ T; the boundary datum ends at T");

  const double theta = cfg.theta;
  const double lambda_gauss = gaussian_lambda_max(theta, t);
  if (cfg.lambda_max) {
    const double c2 = std::cos(2.0 * theta);
    if (*cfg.lambda_max * *cfg.lambda_max * t * c2 < 40.0) {
      std::ostringstream os;
      os << "t = " << t << " is below t_min = " << 40.0 / (*cfg.lambda_max * *cfg.lambda_max * c2)
         << " for Λmax = " << *cfg.lambda_max;
      fail(ErrorKind::accuracy, os.str());
    }
  }
  const bool u0_zero = p.u0.is_trivially_zero();
  const bool g_zero = p.g.is_closed_form() && p.g.id() == "zero";
  const double x_max = *std::max_element(xs.begin(), xs.end());

  std::vector<cplx> sums(xs.size(), cplx{0.0, 0.0});

  // (1/2π) ∫_ℝ e^{iλx − λ²t} û₀(λ) dλ
  if (!u0_zero) {
    const double lam = cfg.lambda_max.value_or(gaussian_lambda_max(0.0, t));
    Refinement refine;
    refine.oscillation_distance = x_max;
    refine.inner_radius = 0.25;
    const Contour line = build_real_line(lam, cfg.panels, refine, cfg.order);
    std::vector<cplx> weighted(line.size());
    for (std::size_t j = 0; j < line.size(); ++j) {
      const cplx z = line.nodes[j];
      weighted[j] = line.weights[j] * std::exp(-z * z * t) * half_line_fourier(p.u0, z);
    }
    parallel_for(xs.size(), [&](std::size_t i) {
      cplx s{0.0, 0.0};
      for (std::size_t j = 0; j < line.size(); ++j) s += weighted[j] * std::exp(I * line.nodes[j] * xs[i]);
      sums[i] += s;
    });
  }

  // −(1/2π) ∫_{∂D+} e^{iλx − λ²t} [2iλ g̃(λ²,t) + û₀(−λ)] dλ
  if (!u0_zero || !g_zero) {
    for (const auto& bucket : detail::bucket_by_octave(xs)) {
      double lam = lambda_gauss;
      if (!g_zero) lam = std::max(lam, exponential_lambda_max(theta, bucket.lo));
      if (cfg.lambda_max) lam = *cfg.lambda_max;
      Refinement refine;
      refine.oscillation_distance = bucket.hi;
      refine.chirp_time = t;
      refine.chirp_radius = lambda_gauss;
      refine.inner_radius = 0.25;
      const Contour c = build_contour(ContourKind::d_plus, theta, lam, cfg.panels, 0.0, refine, cfg.order);

      std::vector<cplx> bracket(c.size());
      for (std::size_t j = 0; j < c.size(); ++j) {
        const cplx z = c.nodes[j];
        const cplx k = z * z;
        cplx term{0.0, 0.0};
        if (!g_zero) {
          const ScaledComplex j_g = t_transform_scaled(p.g, k, t) * ScaledComplex::from_exp(-k * t);
          term += 2.0 * I * z * j_g.value();
        }
        if (!u0_zero) term += std::exp(-k * t) * half_line_fourier(p.u0, -z);
        bracket[j] = c.weights[j] * term;
      }
      parallel_for(bucket.members.size(), [&](std::size_t m) {
        const std::size_t i = bucket.members[m];
        cplx s{0.0, 0.0};
        for (std::size_t j = 0; j < c.size(); ++j) s += bracket[j] * std::exp(I * c.nodes[j] * xs[i]);
        sums[i] -= s;
      });
    }
  }

  std::vector<SolveResult> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const cplx u = sums[i] / (2.0 * kPi);
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag()))
      fail(ErrorKind::accuracy, "non-finite solution value; contour parameters insufficient");
    if (std::abs(u.imag()) >= kImagFailure) {
      std::ostringstream os;
      os << "imaginary residual " << std::abs(u.imag()) << " at x = " << xs[i]
         << " exceeds " << kImagFailure << "; contour parameters insufficient";
      fail(ErrorKind::accuracy, os.str());
    }
    out[i] = {u.real(), u.imag()};
  }
  return out;
}

double solve(const HalfLineProblem& p, double x, double t, const ContourConfig& config) {
  const double xs[] = {x};
  return solve_profile(p, xs, t, config)[0].value;
}

std::vector<double> halfline_response_matrix(std::span<const double> xs, double t, BasisKind basis, int K,
                                             const ContourConfig& cfg) {
  require(!xs.empty(), "need at least one evaluation point");
  for (double x : xs) require(std::isfinite(x) && x > 0.0, "solve requires x > 0");
  require(t > 0.0 && K >= 1, "need t > 0 and K ≥ 1");
  const std::size_t m = static_cast<std::size_t>(K);
  const double lambda_gauss = gaussian_lambda_max(cfg.theta, t);
  std::vector<cplx> sums(xs.size() * m, cplx{0.0, 0.0});

  for (const auto& bucket : detail::bucket_by_octave(xs)) {
    const double lam = cfg.lambda_max.value_or(std::max(lambda_gauss, exponential_lambda_max(cfg.theta, bucket.lo)));
    Refinement refine;
    refine.oscillation_distance = bucket.hi;
    refine.chirp_time = t;
    refine.chirp_radius = lambda_gauss;
    refine.inner_radius = 0.25;
    const Contour c = build_contour(ContourKind::d_plus, cfg.theta, lam, cfg.panels, 0.0, refine, cfg.order);

    std::vector<cplx> coef(c.size() * m);
    parallel_for(c.size(), [&](std::size_t j) {
      const cplx z = c.nodes[j];
      const cplx k = z * z;
      const ScaledComplex decay = ScaledComplex::from_exp(-k * t);
      const auto tr = basis_t_transforms(basis, K, t, k, t);
      for (std::size_t b = 0; b < m; ++b) coef[j * m + b] = c.weights[j] * 2.0 * I * z * (tr[b] * decay).value();
    });
    parallel_for(bucket.members.size(), [&](std::size_t mi) {
      const std::size_t i = bucket.members[mi];
      for (std::size_t j = 0; j < c.size(); ++j) {
        const cplx e = std::exp(I * c.nodes[j] * xs[i]);
        for (std::size_t b = 0; b < m; ++b) sums[i * m + b] -= coef[j * m + b] * e;
      }
    });
  }

  std::vector<double> out(sums.size());
  for (std::size_t n = 0; n < sums.size(); ++n) {
    const cplx u = sums[n] / (2.0 * kPi);
    if (!std::isfinite(u.real()) || std::abs(u.imag()) >= kImagFailure)
      fail(ErrorKind::accuracy, "basis response failed the imaginary-part check; contour parameters insufficient");
    out[n] = u.real();
  }
  return out;
}

std::vector<double> ScanGrid::points() const {
  require(lo > 0.0 && hi >= lo && count >= 1, "scan grid needs 0 < lo ≤ hi and count ≥ 1");
  std::vector<double> pts(count);
  if (count == 1) {
    pts[0] = lo;
    return pts;
  }
  for (int j = 0; j < count; ++j) {
    const double s = static_cast<double>(j) / (count - 1);
    pts[j] = logarithmic ? lo * std::pow(hi / lo, s) : lo + (hi - lo) * s;
  }
  return pts;
}

std::string ScanGrid::describe() const {
  std::ostringstream os;
  os << (logarithmic ? "log" : "linear") << " grid of " << count << " points in [" << lo << ", " << hi << "]";
  return os.str();
}

const char* to_string(Verdict v) { return v == Verdict::obstructed ? "obstructed" : "inconclusive"; }

cplx odd_part_transform(const Profile& u0, double lambda) {
  return half_line_fourier(u0, lambda) - half_line_fourier(u0, -lambda);
}

CertificateReport certificate_from_odd_part(const std::function<cplx(double)>& odd, std::span<const double> scan,
                                            double tolerance, const std::string& scan_description) {
  require(!scan.empty(), "certificate scan must be nonempty");
  for (double l : scan) require(std::isfinite(l) && l > 0.0, "certificate scan points must be positive");
  std::vector<double> pts(scan.begin(), scan.end());
  std::sort(pts.begin(), pts.end());

  auto gap_at = [&](double l) { return std::abs(odd(l)); };
  auto ratio_at = [&](double l) { return gap_at(l) / (2.0 * l); };

  CertificateReport rep;
  rep.tolerance = tolerance;
  std::tie(rep.lambda_star, rep.gap) = refined_max(gap_at, pts);

  // λ² > 1: the supremum may sit at the boundary λ → 1⁺, so λ = 1 joins the
  // candidates whenever the scan extends past it.
  std::vector<double> upper;
  if (pts.back() > 1.0) upper.push_back(1.0);
  for (double l : pts)
    if (l > 1.0) upper.push_back(l);
  if (!upper.empty()) rep.M = refined_max(ratio_at, upper).second;

  rep.verdict = rep.gap > tolerance ? Verdict::obstructed : Verdict::inconclusive;
  std::ostringstream scan_desc;
  if (!scan_description.empty()) {
    scan_desc << scan_description;
  } else {
    scan_desc << pts.size() << " points in [" << pts.front() << ", " << pts.back() << "]";
  }
  rep.scan = scan_desc.str();
  rep.interpretation =
      rep.verdict == Verdict::obstructed
          ? "û₀(λ*) ≠ û₀(−λ*): an exact null control would force |∫₀^T e^{λ²t} g dt| ≤ M for all "
            "λ² > 1, hence g ≡ 0, hence û₀ even on ℝ, contradicting this witness. No g ∈ L²(0,T) "
            "steers u0 to zero at any T."
          : "no λ in the scan separates û₀(λ) from û₀(−λ); a finite scan cannot certify "
            "controllability.";
  return rep;
}

CertificateReport obstruction_certificate(const Profile& u0, std::span<const double> scan, double tolerance,
                                          const std::string& scan_description) {
  return certificate_from_odd_part([&](double l) { return odd_part_transform(u0, l); }, scan, tolerance,
                                   scan_description);
}

CertificateReport obstruction_certificate(const Profile& u0, const ScanGrid& scan, double tolerance) {
  const auto pts = scan.points();
  return obstruction_certificate(u0, pts, tolerance, scan.describe());
}

const char* to_string(GrowthFlag f) {
  switch (f) {
    case GrowthFlag::bounded: return "bounded";
    case GrowthFlag::unbounded_growth: return "unbounded-growth";
    case GrowthFlag::inconclusive: return "inconclusive";
  }
  return "?";
}

GrowthReport yosida_growth_test(const TimeSignal& g, std::span<const double> k_grid, double bound) {
  GrowthReport rep;
  rep.bound = bound;
  const double T = g.horizon();
  for (double k : k_grid) {
    require(std::isfinite(k) && k > 1.0, "growth test grid needs λ² > 1");
    GrowthRow row;
    row.k = k;
    row.value = t_transform_scaled(g, cplx{k, 0.0}, T);
    row.log_abs = row.value.log_abs();
    rep.rows.push_back(row);
  }

  // Least-squares line through (λ², log|g̃|) over the nonzero rows.
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& row : rep.rows) {
    if (!std::isfinite(row.log_abs)) continue;
    n += 1, sx += row.k, sy += row.log_abs, sxx += row.k * row.k, sxy += row.k * row.log_abs;
  }
  bool fitted = false;
  if (n >= 2) {
    const double den = n * sxx - sx * sx;
    if (den > 0.0) {
      rep.slope = (n * sxy - sx * sy) / den;
      rep.intercept = (sy - rep.slope * sx) / n;
      double ss_tot = 0.0, ss_res = 0.0;
      const double mean = sy / n;
      for (const auto& row : rep.rows) {
        if (!std::isfinite(row.log_abs)) continue;
        const double fit = rep.intercept + rep.slope * row.k;
        ss_res += (row.log_abs - fit) * (row.log_abs - fit);
        ss_tot += (row.log_abs - mean) * (row.log_abs - mean);
      }
      rep.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
      fitted = true;
    }
  }

  const bool all_below = std::all_of(rep.rows.begin(), rep.rows.end(), [&](const GrowthRow& row) {
    return row.value.is_zero() || row.log_abs < std::log(bound);
  });
  if (fitted && rep.slope > kGrowthSlopeMin && rep.r_squared > 0.9)
    rep.flag = GrowthFlag::unbounded_growth;
  else if (all_below)
    rep.flag = GrowthFlag::bounded;
  else
    rep.flag = GrowthFlag::inconclusive;
  return rep;
}

}  // namespace utm
