#include "utm/halfspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "utm/error.hpp"
#include "utm/parallel.hpp"
#include "utm/transforms.hpp"

namespace utm {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I{0.0, 1.0};

const std::vector<std::string> kTangentialIds{"gaussian", "two_sided_exp", "plane_wave"};

const std::vector<std::string>& allowed_keys(const std::string& id) {
  static const std::vector<std::string> gaussian{"w", "amp"}, two_sided{"c", "amp"}, wave{"alpha", "amp"};
  if (id == "gaussian") return gaussian;
  if (id == "two_sided_exp") return two_sided;
  return wave;
}

}  // namespace

Tangential Tangential::closed_form(const std::string& id, Params params) {
  if (std::find(kTangentialIds.begin(), kTangentialIds.end(), id) == kTangentialIds.end())
    fail(ErrorKind::validation, "unknown tangential profile '" + id + "'");
  const auto& keys = allowed_keys(id);
  for (const auto& [k, v] : params) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      fail(ErrorKind::validation, "unknown parameter '" + k + "' for tangential profile '" + id + "'");
    require(std::isfinite(v), "tangential parameters must be finite");
  }
  Tangential t;
  t.id_ = id;
  t.params_ = std::move(params);
  if (id == "gaussian") require(t.param("w") > 0.0, "gaussian width must be positive");
  if (id == "two_sided_exp") require(t.param("c") > 0.0, "decay rate must be positive");
  return t;
}

const std::vector<std::string>& Tangential::registry() { return kTangentialIds; }

double Tangential::param(const std::string& key) const {
  if (auto it = params_.find(key); it != params_.end()) return it->second;
  if (key == "amp" || key == "w" || key == "c") return 1.0;
  return 0.0;
}

cplx Tangential::operator()(double x) const {
  const double amp = param("amp");
  if (id_ == "gaussian") return amp * std::exp(-std::pow(x / param("w"), 2));
  if (id_ == "two_sided_exp") return amp * std::exp(-param("c") * std::abs(x));
  return amp * std::exp(I * param("alpha") * x);
}

cplx Tangential::transform(double l) const {
  const double amp = param("amp");
  if (id_ == "gaussian") {
    const double w = param("w");
    return amp * w * std::sqrt(kPi) * std::exp(-0.25 * l * l * w * w);
  }
  if (id_ == "two_sided_exp") {
    const double c = param("c");
    return amp * 2.0 * c / (c * c + l * l);
  }
  return std::abs(l - param("alpha")) <= 1e-12 * (1.0 + std::abs(l)) ? cplx{amp, 0.0} : cplx{0.0, 0.0};
}

HalfSpaceField HalfSpaceField::separable(Tangential a, Profile b) {
  require(b.domain().kind == DomainKind::half_line, "normal factor must be a half-line profile");
  HalfSpaceField f;
  f.a_ = std::move(a);
  f.b_ = std::move(b);
  return f;
}

HalfSpaceField HalfSpaceField::sampled(SampledField field) {
  const auto& tg = field.tangential_grid;
  const auto& ng = field.normal_grid;
  require(tg.size() >= 2 && ng.size() >= 2, "sampled field needs at least a 2×2 grid");
  require(field.values.size() == tg.size() * ng.size(), "sampled field values must fill the grid");
  for (std::size_t i = 1; i < tg.size(); ++i) require(tg[i] > tg[i - 1], "tangential grid must increase");
  HalfSpaceField f;
  for (std::size_t i = 0; i < tg.size(); ++i) {
    std::vector<double> row(field.values.begin() + static_cast<std::ptrdiff_t>(i * ng.size()),
                            field.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * ng.size()));
    f.rows_.push_back(Profile::sampled(Domain::half_line(), ng, std::move(row), SampleQuadrature::trapezoid,
                                       field.normal_decay));
  }
  f.samples_ = std::move(field);
  return f;
}

const Tangential& HalfSpaceField::tangential() const {
  require(a_.has_value(), "sampled field has no tangential factor");
  return *a_;
}

const Profile& HalfSpaceField::normal() const {
  require(b_.has_value(), "sampled field has no normal factor");
  return *b_;
}

const SampledField& HalfSpaceField::samples() const {
  require(samples_.has_value(), "separable field has no samples");
  return *samples_;
}

cplx HalfSpaceField::transform(double lt, cplx ln) const {
  if (ln.imag() > 0.0) fail(ErrorKind::domain, "half-space transform needs Im λ_N ≤ 0");
  if (!samples_) {
    const cplx w = a_->transform(lt);
    if (w == cplx{0.0, 0.0}) return w;
    return w * half_line_fourier(*b_, ln);
  }
  const auto& tg = samples_->tangential_grid;
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < tg.size(); ++i) {
    const double w = i == 0 ? 0.5 * (tg[1] - tg[0])
                     : i + 1 == tg.size() ? 0.5 * (tg[i] - tg[i - 1])
                                          : 0.5 * (tg[i + 1] - tg[i - 1]);
    sum += w * std::exp(-I * lt * tg[i]) * half_line_fourier(rows_[i], ln);
  }
  return sum;
}

bool HalfSpaceField::is_trivially_zero() const {
  if (!samples_) return b_->is_trivially_zero() || (a_->params().count("amp") && a_->params().at("amp") == 0.0);
  return std::all_of(samples_->values.begin(), samples_->values.end(), [](double v) { return v == 0.0; });
}

ScaledComplex SeparableSignal::t_transform(double lt, cplx k, double t) const {
  const cplx w = a.transform(lt);
  if (w == cplx{0.0, 0.0}) return {};
  return t_transform_scaled(gamma, k, t) * w;
}

HalfSpaceProblem2D::HalfSpaceProblem2D(HalfSpaceField u0_, SeparableSignal g_, double T_, std::vector<double> grid)
    : u0(std::move(u0_)), g(std::move(g_)), T(T_), lambda_t_grid(std::move(grid)) {
  require(std::isfinite(T) && T > 0.0, "horizon T must be positive");
  require(g.gamma.horizon() >= T * (1.0 - 1e-12), "boundary datum horizon must cover [0, T]");
  require(!lambda_t_grid.empty(), "tangential frequency grid must be nonempty");
  std::vector<double> sorted = lambda_t_grid;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    require(std::isfinite(sorted[i]), "tangential frequencies must be finite");
    require(std::abs(sorted[i] + sorted[sorted.size() - 1 - i]) <= 1e-12 * (1.0 + std::abs(sorted[i])),
            "tangential frequency grid must be symmetric about 0");
  }
}

RelationResidual halfspace_global_relation_residual(const HalfSpaceProblem2D& p, const SeparableSignal& h,
                                                    const HalfSpaceField& u_t, double lt, cplx ln, double t) {
  require(t > 0.0 && t <= p.T * (1.0 + 1e-12), "time must lie in (0, T]");
  require(h.gamma.horizon() >= t * (1.0 - 1e-12), "Neumann trace horizon must cover [0, t]");
  if (ln.imag() > 0.0) fail(ErrorKind::domain, "half-space global relation holds for Im λ_N ≤ 0");
  const cplx k = lt * lt + ln * ln;
  const ScaledComplex terms[] = {
      ScaledComplex::from_exp(k * t) * u_t.transform(lt, ln),
      -ScaledComplex{p.u0.transform(lt, ln), 0.0},
      h.t_transform(lt, k, t),
      (I * ln) * p.g.t_transform(lt, k, t),
  };
  RelationResidual out;
  for (const auto& term : terms) {
    out.value += term;
    if (!term.is_zero()) out.scale_exponent = std::max(out.scale_exponent, term.log_abs());
  }
  return out;
}

HalfSpaceProblem2D manufactured_plane_wave(double a, double b, double T) {
  require(b > 0.0, "manufactured family needs b > 0");
  const double kappa = b * b - a * a;
  HalfSpaceField u0 = HalfSpaceField::separable(Tangential::closed_form("plane_wave", {{"alpha", a}}),
                                                Profile::closed_form(Domain::half_line(), "exp_decay", {{"a", b}}));
  SeparableSignal g{Tangential::closed_form("plane_wave", {{"alpha", a}}),
                    TimeSignal::closed_form(T, "exp", {{"c", 1.0}, {"b", kappa}})};
  return HalfSpaceProblem2D(std::move(u0), std::move(g), T, {-a, a});
}

SeparableSignal manufactured_plane_wave_trace(double a, double b, double T) {
  return {Tangential::closed_form("plane_wave", {{"alpha", a}}),
          TimeSignal::closed_form(T, "exp", {{"c", -b}, {"b", b * b - a * a}})};
}

HalfSpaceField manufactured_plane_wave_snapshot(double a, double b, double t) {
  return HalfSpaceField::separable(
      Tangential::closed_form("plane_wave", {{"alpha", a}}),
      Profile::closed_form(Domain::half_line(), "exp_decay", {{"a", b}, {"amp", std::exp((b * b - a * a) * t)}}));
}

HalfSpaceCertificate halfspace_obstruction_certificate(const HalfSpaceField& u0, std::span<const double> lambda_t_grid,
                                                       std::span<const double> normal_scan, const SeparableSignal* g,
                                                       double T, double tolerance) {
  require(!lambda_t_grid.empty() && !normal_scan.empty(), "certificate grids must be nonempty");
  if (g) require(T > 0.0, "growth diagnostic needs T > 0");
  HalfSpaceCertificate out;
  out.reduced_accuracy = !u0.is_separable();
  out.slices.resize(lambda_t_grid.size());
  std::vector<double> scan(normal_scan.begin(), normal_scan.end());
  std::sort(scan.begin(), scan.end());
  {
    std::ostringstream os;
    os << lambda_t_grid.size() << " tangential frequencies; normal scan of " << scan.size() << " points in ["
       << scan.front() << ", " << scan.back() << "]";
    out.scan = os.str();
  }

  parallel_for(lambda_t_grid.size(), [&](std::size_t s) {
    const double lt = lambda_t_grid[s];
    SliceCertificate& slice = out.slices[s];
    slice.lambda_t = lt;
    slice.tangential_weight = u0.is_separable() ? u0.tangential().transform(lt) : cplx{1.0, 0.0};
    auto odd = [&](double l) { return u0.transform(lt, l) - u0.transform(lt, -l); };
    slice.report = certificate_from_odd_part(odd, scan, tolerance);
    if (g) {
      const cplx w = g->a.transform(lt);
      if (w != cplx{0.0, 0.0}) slice.F = ScaledComplex::from_exp(cplx{lt * lt * T, 0.0}) * (w * g->gamma(T));
    }
  });
  for (const auto& slice : out.slices)
    if (slice.report.verdict == Verdict::obstructed) out.verdict = Verdict::obstructed;
  return out;
}

}  // namespace utm
