#include "utm/signal.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "utm/error.hpp"
#include "utm/quadrature.hpp"
#include "utm/special.hpp"

namespace utm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kKernelOrder = 16;
constexpr double kKernelCutoff = 45.0;  // e^{-45} ≈ 3e-20

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"zero", {}},
      {"const", {"c"}},
      {"exp", {"c", "b"}},
      {"sine", {"c", "w"}},
  };
  return keys;
}

void check_time(double t, double horizon) {
  if (!(t >= 0.0)) fail(ErrorKind::validation, "time must be nonnegative");
  if (t > horizon * (1.0 + 1e-12))
    fail(ErrorKind::horizon, "time " + std::to_string(t) + " exceeds horizon " + std::to_string(horizon));
}

// ∫₀^t e^{-κσ} F_m(σ) dσ for every m, Re κ ≥ 0. `fill(σ, values)` writes F_m(σ).
template <class Fill>
std::vector<cplx> decaying_kernel_integral(cplx kappa, double t, int count, Fill&& fill) {
  std::vector<cplx> out(count, cplx{0.0, 0.0});
  if (t <= 0.0) return out;
  const double re = std::max(kappa.real(), 0.0);
  const double abs_k = std::abs(kappa);
  const double end = re * t > kKernelCutoff ? kKernelCutoff / re : t;
  double max_width = 0.25 * t;
  double first = max_width;
  if (abs_k > 0.0) {
    max_width = std::min(max_width, 4.0 / abs_k);
    first = std::min(max_width, 0.5 / abs_k);
  }
  if (end / max_width > 2e5)
    fail(ErrorKind::accuracy, "t-transform kernel too oscillatory for quadrature (|k| t too large with Re k ≈ 0)");
  const std::vector<double> edges = quad::graded_edges(0.0, end, first, max_width);
  std::vector<double> values(count);
  for (const auto& node : quad::composite(edges, kKernelOrder)) {
    fill(node.x, values);
    const cplx weight = node.w * std::exp(-kappa * node.x);
    for (int m = 0; m < count; ++m) out[m] += weight * values[m];
  }
  return out;
}

// ∫₀^t e^{kτ} F_m(τ) dτ via the stable orientation of the kernel.
template <class Eval>
std::vector<ScaledComplex> kernel_t_transform(cplx k, double t, int count, Eval&& eval) {
  std::vector<ScaledComplex> out(count);
  if (t <= 0.0) return out;
  if (k.real() >= 0.0) {
    const auto integrals = decaying_kernel_integral(
        k, t, count, [&](double sigma, std::vector<double>& v) { eval(t - sigma, v); });
    const ScaledComplex factor = ScaledComplex::from_exp(k * t);
    for (int m = 0; m < count; ++m) out[m] = factor * integrals[m];
  } else {
    const auto integrals = decaying_kernel_integral(
        -k, t, count, [&](double tau, std::vector<double>& v) { eval(tau, v); });
    for (int m = 0; m < count; ++m) out[m] = {integrals[m], 0.0};
  }
  return out;
}

void fill_basis(BasisKind kind, int K, double horizon, double t, std::vector<double>& v) {
  switch (kind) {
    case BasisKind::legendre:
      quad::legendre_values(std::clamp(2.0 * t / horizon - 1.0, -1.0, 1.0), v);
      break;
    case BasisKind::sine:
      for (int m = 0; m < K; ++m) v[m] = std::sin((m + 1) * kPi * t / horizon);
      break;
    case BasisKind::piecewise_constant:
      for (int m = 0; m < K; ++m) v[m] = basis_value(kind, K, horizon, m, t);
      break;
  }
}

}  // namespace

const char* to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::piecewise_constant: return "piecewise_constant";
    case BasisKind::legendre: return "legendre";
    case BasisKind::sine: return "sine";
  }
  return "?";
}

BasisKind basis_from_string(const std::string& name) {
  if (name == "piecewise_constant" || name == "piecewise-constant") return BasisKind::piecewise_constant;
  if (name == "legendre") return BasisKind::legendre;
  if (name == "sine") return BasisKind::sine;
  fail(ErrorKind::validation, "unknown basis '" + name + "'");
}

const std::vector<std::string>& TimeSignal::registry() {
  static const std::vector<std::string> ids{"zero", "const", "exp", "sine"};
  return ids;
}

TimeSignal TimeSignal::closed_form(double horizon, const std::string& id, Params params) {
  require(std::isfinite(horizon) && horizon > 0.0, "signal horizon must be positive");
  const auto& keys = allowed_keys();
  const auto it = keys.find(id);
  require(it != keys.end(), "unknown signal id '" + id + "'");
  for (const auto& [key, value] : params) {
    require(it->second.count(key) == 1, "signal '" + id + "' has no parameter '" + key + "'");
    require(std::isfinite(value), "signal parameter '" + key + "' must be finite");
  }
  TimeSignal s;
  s.horizon_ = horizon;
  s.closed_ = true;
  s.id_ = id;
  s.params_ = std::move(params);
  if (id == "const") s.params_.try_emplace("c", 1.0);
  if (id == "exp") {
    s.params_.try_emplace("c", 1.0);
    s.params_.try_emplace("b", 1.0);
  }
  if (id == "sine") {
    s.params_.try_emplace("c", 1.0);
    s.params_.try_emplace("w", kPi);
  }
  return s;
}

TimeSignal TimeSignal::basis(double horizon, BasisKind kind, std::vector<double> coefficients) {
  require(std::isfinite(horizon) && horizon > 0.0, "signal horizon must be positive");
  require(!coefficients.empty(), "basis expansion needs at least one coefficient");
  for (double c : coefficients) require(std::isfinite(c), "basis coefficients must be finite");
  TimeSignal s;
  s.horizon_ = horizon;
  s.closed_ = false;
  s.id_ = to_string(kind);
  s.basis_kind_ = kind;
  s.coefficients_ = std::move(coefficients);
  return s;
}

double TimeSignal::param(const std::string& key) const {
  const auto it = params_.find(key);
  return it == params_.end() ? 0.0 : it->second;
}

double basis_value(BasisKind kind, int K, double horizon, int m, double t) {
  switch (kind) {
    case BasisKind::piecewise_constant: {
      const int cell = std::min(K - 1, static_cast<int>(std::floor(t / horizon * K)));
      return cell == m ? 1.0 : 0.0;
    }
    case BasisKind::legendre: {
      std::vector<double> v(m + 1);
      quad::legendre_values(std::clamp(2.0 * t / horizon - 1.0, -1.0, 1.0), v);
      return v[m];
    }
    case BasisKind::sine:
      return std::sin((m + 1) * kPi * t / horizon);
  }
  return 0.0;
}

double TimeSignal::operator()(double t) const {
  check_time(t, horizon_);
  if (closed_) {
    if (id_ == "zero") return 0.0;
    if (id_ == "const") return param("c");
    if (id_ == "exp") return param("c") * std::exp(param("b") * t);
    return param("c") * std::sin(param("w") * t);
  }
  const int K = static_cast<int>(coefficients_.size());
  std::vector<double> v(K);
  fill_basis(basis_kind_, K, horizon_, t, v);
  double sum = 0.0;
  for (int m = 0; m < K; ++m) sum += coefficients_[m] * v[m];
  return sum;
}

double TimeSignal::l2_norm() const {
  const int K = closed_ ? 1 : static_cast<int>(coefficients_.size());
  const int panels = K * ((64 + K - 1) / K);
  std::vector<double> edges(panels + 1);
  for (int j = 0; j <= panels; ++j) edges[j] = horizon_ * j / panels;
  double sum = 0.0;
  for (const auto& node : quad::composite(edges, 16)) {
    const double f = (*this)(node.x);
    sum += node.w * f * f;
  }
  return std::sqrt(sum);
}

std::vector<ScaledComplex> basis_t_transforms(BasisKind kind, int K, double horizon, cplx k, double t) {
  require(K >= 1, "basis size must be positive");
  check_time(t, horizon);
  if (kind == BasisKind::piecewise_constant) {
    std::vector<ScaledComplex> out(K);
    for (int m = 0; m < K; ++m) {
      const double a = horizon * m / K;
      const double b = std::min(horizon * (m + 1) / K, t);
      if (b > a) out[m] = ScaledComplex::from_exp(k * a) * special::exp_integral(k, b - a);
    }
    return out;
  }
  return kernel_t_transform(k, t, K, [&](double tau, std::vector<double>& v) {
    fill_basis(kind, K, horizon, tau, v);
  });
}

ScaledComplex TimeSignal::t_transform(cplx k, double t) const {
  check_time(t, horizon_);
  if (t == 0.0) return {};
  if (closed_) {
    if (id_ == "zero") return {};
    if (id_ == "const") return param("c") * special::exp_integral(k, t);
    if (id_ == "exp") return param("c") * special::exp_integral(k + param("b"), t);
    const double c = param("c"), w = param("w");
    return kernel_t_transform(k, t, 1, [&](double tau, std::vector<double>& v) {
      v[0] = c * std::sin(w * tau);
    })[0];
  }
  const int K = static_cast<int>(coefficients_.size());
  const auto parts = basis_t_transforms(basis_kind_, K, horizon_, k, t);
  ScaledComplex sum;
  for (int m = 0; m < K; ++m)
    if (coefficients_[m] != 0.0) sum += parts[m] * coefficients_[m];
  return sum;
}

}  // namespace utm
