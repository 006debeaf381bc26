#include "utm/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "utm/error.hpp"
#include "utm/quadrature.hpp"
#include "utm/special.hpp"

namespace utm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxPolyDegree = 9;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = [] {
    std::map<std::string, std::set<std::string>> k{
        {"zero", {"amp"}},
        {"exp_decay", {"a", "amp"}},
        {"indicator", {"b", "amp"}},
        {"gaussian_bump", {"c", "w", "amp"}},
        {"sine_mode", {"n", "amp"}},
        {"poly_exp", {"a", "amp"}},
    };
    for (int j = 0; j <= kMaxPolyDegree; ++j) k["poly_exp"].insert("c" + std::to_string(j));
    return k;
  }();
  return keys;
}

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

}  // namespace

Domain Domain::interval(double L) {
  require(std::isfinite(L) && L > 0.0, "interval length must be positive");
  return {DomainKind::interval, L};
}

const std::vector<std::string>& Profile::registry() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, _] : allowed_keys()) out.push_back(id);
    return out;
  }();
  return ids;
}

Profile Profile::closed_form(Domain domain, const std::string& id, Params params) {
  const auto& keys = allowed_keys();
  const auto it = keys.find(id);
  require(it != keys.end(), "unknown profile id '" + id + "'");
  for (const auto& [key, value] : params) {
    require(it->second.count(key) == 1, "profile '" + id + "' has no parameter '" + key + "'");
    require(std::isfinite(value), "profile parameter '" + key + "' must be finite");
  }

  Profile p;
  p.domain_ = domain;
  p.id_ = id;
  p.params_ = std::move(params);
  const bool half = domain.kind == DomainKind::half_line;

  if (id == "exp_decay") {
    require(p.params_.count("a") == 1, "exp_decay requires parameter a");
    if (half) require(p.param("a") > 0.0, "exp_decay on the half line requires a > 0");
  } else if (id == "indicator") {
    require(p.params_.count("b") == 1 && p.param("b") > 0.0, "indicator requires b > 0");
  } else if (id == "gaussian_bump") {
    p.params_.try_emplace("c", 1.0);
    p.params_.try_emplace("w", 0.25);
    require(p.param("w") > 0.0, "gaussian_bump requires w > 0");
  } else if (id == "sine_mode") {
    require(!half, "sine_mode is only defined on an interval");
    require(p.params_.count("n") == 1, "sine_mode requires parameter n");
    const double n = p.param("n");
    require(n >= 1.0 && n == std::floor(n), "sine_mode requires a positive integer n");
  } else if (id == "poly_exp") {
    p.params_.try_emplace("a", 0.0);
    if (half) require(p.param("a") > 0.0, "poly_exp on the half line requires a > 0");
  }
  return p;
}

Profile Profile::sampled(Domain domain, std::vector<double> grid, std::vector<double> values,
                         SampleQuadrature quadrature, std::optional<double> decay_hint,
                         double tail_eps) {
  require(grid.size() >= 2, "sampled profile needs at least two grid points");
  require(grid.size() == values.size(), "grid and values must have equal length");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    require(std::isfinite(grid[j]) && std::isfinite(values[j]), "samples must be finite");
    if (j > 0) require(grid[j] > grid[j - 1], "sample grid must be strictly increasing");
  }
  require(grid.front() >= 0.0, "sample grid must lie in the domain");
  if (domain.kind == DomainKind::interval)
    require(grid.back() <= domain.length, "sample grid must lie in [0, L]");
  if (decay_hint) {
    require(domain.kind == DomainKind::half_line, "decay_hint only applies on the half line");
    require(*decay_hint > 0.0, "decay_hint must be positive");
  }
  require(tail_eps > 0.0 && tail_eps < 1.0, "tail_eps must lie in (0, 1)");

  Profile p;
  p.domain_ = domain;
  p.id_ = "samples";
  p.samples_ = Samples{std::move(grid), std::move(values)};
  p.quadrature_ = quadrature;
  p.decay_hint_ = decay_hint;
  p.tail_eps_ = tail_eps;

  const double l1 = p.l1_norm(), l2 = p.l2_norm();
  require(std::isfinite(l1) && std::isfinite(l2), "sampled profile norms must be finite");
  return p;
}

const std::vector<double>& Profile::grid() const {
  require(samples_.has_value(), "closed-form profile has no grid");
  return samples_->grid;
}

const std::vector<double>& Profile::values() const {
  require(samples_.has_value(), "closed-form profile has no samples");
  return samples_->values;
}

double Profile::amp() const {
  const auto it = params_.find("amp");
  return it == params_.end() ? 1.0 : it->second;
}

double Profile::param(const std::string& key) const {
  const auto it = params_.find(key);
  return it == params_.end() ? 0.0 : it->second;
}

bool Profile::is_trivially_zero() const {
  if (samples_)
    return std::all_of(samples_->values.begin(), samples_->values.end(),
                       [](double v) { return v == 0.0; });
  if (id_ == "zero" || amp() == 0.0) return true;
  if (id_ == "poly_exp") {
    for (int j = 0; j <= kMaxPolyDegree; ++j)
      if (param("c" + std::to_string(j)) != 0.0) return false;
    return true;
  }
  return false;
}

Profile Profile::scaled(double s) const {
  Profile p = *this;
  if (p.samples_) {
    for (double& v : p.samples_->values) v *= s;
  } else {
    p.params_["amp"] = amp() * s;
  }
  return p;
}

double Profile::sample_interp(double x) const {
  const auto& g = samples_->grid;
  const auto& v = samples_->values;
  const std::size_t n = g.size();
  if (x > g.back()) {
    if (decay_hint_) return v.back() * std::exp(-*decay_hint_ * (x - g.back()));
    return 0.0;
  }
  if (x < g.front()) return 0.0;
  std::size_t j = std::upper_bound(g.begin(), g.end(), x) - g.begin();
  j = std::clamp<std::size_t>(j, 1, n - 1) - 1;  // x in [g[j], g[j+1]]
  if (quadrature_ == SampleQuadrature::trapezoid || n < 4) {
    const double s = (x - g[j]) / (g[j + 1] - g[j]);
    return (1.0 - s) * v[j] + s * v[j + 1];
  }
  const std::size_t lo = std::min(j > 0 ? j - 1 : 0, n - 4);
  double sum = 0.0;
  for (std::size_t a = lo; a < lo + 4; ++a) {
    double basis = 1.0;
    for (std::size_t b = lo; b < lo + 4; ++b)
      if (b != a) basis *= (x - g[b]) / (g[a] - g[b]);
    sum += basis * v[a];
  }
  return sum;
}

double Profile::operator()(double x) const {
  if (x < 0.0) return 0.0;
  if (domain_.kind == DomainKind::interval && x > domain_.length) return 0.0;
  if (samples_) return sample_interp(x);

  const double A = amp();
  if (id_ == "zero") return 0.0;
  if (id_ == "exp_decay") return A * std::exp(-param("a") * x);
  if (id_ == "indicator") return x <= param("b") ? A : 0.0;
  if (id_ == "gaussian_bump") {
    const double z = (x - param("c")) / param("w");
    return A * std::exp(-z * z);
  }
  if (id_ == "sine_mode") return A * std::sin(param("n") * kPi * x / domain_.length);
  // poly_exp
  double poly = 0.0;
  for (int k = kMaxPolyDegree; k >= 0; --k) poly = poly * x + param("c" + std::to_string(k));
  return A * poly * std::exp(-param("a") * x);
}

double Profile::effective_end() const {
  if (domain_.kind == DomainKind::interval) return domain_.length;
  if (samples_) {
    const double end = samples_->grid.back();
    if (decay_hint_) return std::max(end, -std::log(tail_eps_) / *decay_hint_);
    return end;
  }
  if (id_ == "exp_decay") return 60.0 / param("a");
  if (id_ == "poly_exp") return (60.0 + 4.0 * kMaxPolyDegree) / param("a");
  if (id_ == "indicator") return param("b");
  if (id_ == "gaussian_bump") return std::max(param("c") + 10.0 * param("w"), 1e-3);
  return 1.0;
}

std::vector<double> Profile::breakpoints() const {
  const double end = effective_end();
  std::vector<double> pts{0.0, end};
  if (samples_) {
    pts.insert(pts.end(), samples_->grid.begin(), samples_->grid.end());
  } else if (id_ == "indicator") {
    pts.push_back(std::min(param("b"), end));
  } else if (id_ == "gaussian_bump") {
    pts.push_back(std::clamp(param("c") - 10.0 * param("w"), 0.0, end));
    pts.push_back(std::clamp(param("c"), 0.0, end));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

template <class F>
double Profile::integrate(F&& integrand) const {
  double sum = 0.0;
  if (samples_ && quadrature_ == SampleQuadrature::trapezoid) {
    const auto& g = samples_->grid;
    const auto& v = samples_->values;
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
      const double h = 0.5 * (g[j + 1] - g[j]);
      sum += h * (integrand(g[j], v[j]) + integrand(g[j + 1], v[j + 1]));
    }
    if (decay_hint_ && effective_end() > g.back()) {
      const std::vector<double> edges = quad::graded_edges(g.back(), effective_end(), 0.05, 1.0);
      for (const auto& node : quad::composite(edges, 16))
        sum += node.w * integrand(node.x, sample_interp(node.x));
    }
    return sum;
  }
  const std::vector<double> pts = breakpoints();
  const int panels = samples_ ? 2 : 200;
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    const double a = pts[s], b = pts[s + 1];
    if (!(b > a)) continue;
    std::vector<double> edges(panels + 1);
    for (int j = 0; j <= panels; ++j) edges[j] = a + (b - a) * j / panels;
    for (const auto& node : quad::composite(edges, 16))
      sum += node.w * integrand(node.x, (*this)(node.x));
  }
  return sum;
}

double Profile::moment(int k) const {
  require(k >= 0, "moment order must be nonnegative");
  return integrate([k](double x, double f) { return std::pow(x, k) * f; });
}

double Profile::l1_norm() const {
  return integrate([](double, double f) { return std::abs(f); });
}

double Profile::l2_norm() const {
  return std::sqrt(integrate([](double, double f) { return f * f; }));
}

cplx Profile::gaussian_transform(cplx lambda) const {
  const double c = param("c"), w = param("w");
  const double lo = std::max(0.0, c - 10.0 * w);
  double hi = c + 10.0 * w;
  if (domain_.kind == DomainKind::interval) hi = std::min(hi, domain_.length);
  if (!(hi > lo)) return {0.0, 0.0};
  const double width = std::min(0.5 * w, 2.0 / (std::abs(lambda.real()) + 1e-300));
  const int panels = std::max(4, static_cast<int>(std::ceil((hi - lo) / width)));
  std::vector<double> edges(panels + 1);
  for (int j = 0; j <= panels; ++j) edges[j] = lo + (hi - lo) * j / panels;
  cplx sum{0.0, 0.0};
  const cplx mi{0.0, -1.0};
  for (const auto& node : quad::composite(edges, 16))
    sum += node.w * (*this)(node.x) * std::exp(mi * lambda * node.x);
  return sum;
}

cplx Profile::samples_transform(cplx lambda) const {
  const auto& g = samples_->grid;
  const auto& v = samples_->values;
  const cplx mi{0.0, -1.0};
  cplx sum{0.0, 0.0};

  if (quadrature_ == SampleQuadrature::trapezoid) {
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
      const double h = 0.5 * (g[j + 1] - g[j]);
      sum += h * (v[j] * std::exp(mi * lambda * g[j]) + v[j + 1] * std::exp(mi * lambda * g[j + 1]));
    }
  } else {
    const double freq = std::abs(lambda.real());
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
      const double a = g[j], b = g[j + 1];
      const int sub = std::max(1, static_cast<int>(std::ceil(freq * (b - a) / 3.0)));
      std::vector<double> edges(sub + 1);
      for (int s = 0; s <= sub; ++s) edges[s] = a + (b - a) * s / sub;
      for (const auto& node : quad::composite(edges, 8))
        sum += node.w * sample_interp(node.x) * std::exp(mi * lambda * node.x);
    }
  }

  if (domain_.kind == DomainKind::half_line) {
    const double fN = v.back();
    if (decay_hint_) {
      const double a = *decay_hint_;
      const double D = std::max(0.0, -std::log(tail_eps_) / a - g.back());
      if (D > 0.0 && fN != 0.0)
        sum += fN * std::exp(mi * lambda * g.back()) * D * special::phi1((a + cplx{0.0, 1.0} * lambda) * D);
    } else {
      double peak = 0.0;
      for (double f : v) peak = std::max(peak, std::abs(f));
      if (std::abs(fN) > tail_eps_ * peak)
        fail(ErrorKind::truncation,
             "sampled half-line profile does not decay below tail_eps at the last grid point "
             "and carries no decay_hint");
    }
  }
  return sum;
}

cplx Profile::transform_unchecked(cplx lambda) const {
  if (samples_) return samples_transform(lambda);

  const double A = amp();
  const cplx i{0.0, 1.0};
  const bool half = domain_.kind == DomainKind::half_line;
  const double L = domain_.length;

  if (id_ == "zero" || A == 0.0) return {0.0, 0.0};
  if (id_ == "gaussian_bump") return gaussian_transform(lambda);

  if (id_ == "exp_decay") {
    const cplx s = param("a") + i * lambda;
    return half ? A / s : A * L * special::phi1(s * L);
  }
  if (id_ == "indicator") {
    const double b = half ? param("b") : std::min(param("b"), L);
    return A * b * special::phi1(i * lambda * b);
  }
  if (id_ == "sine_mode") {
    const double n = param("n");
    const double kappa = n * kPi / L;
    const double sign = std::fmod(n, 2.0) == 0.0 ? 1.0 : -1.0;
    if (std::abs(lambda - kappa) * L < 1.0) {
      const cplx d = lambda - kappa;
      return A * kappa * (-i * L * special::phi1(i * d * L)) / (kappa + lambda);
    }
    if (std::abs(lambda + kappa) * L < 1.0) {
      const cplx d = lambda + kappa;
      return A * kappa * (i * L * special::phi1(i * d * L)) / (kappa - lambda);
    }
    return A * kappa * (1.0 - sign * std::exp(-i * lambda * L)) / (kappa * kappa - lambda * lambda);
  }
  // poly_exp
  const cplx s = param("a") + i * lambda;
  cplx sum{0.0, 0.0};
  for (int k = 0; k <= kMaxPolyDegree; ++k) {
    const double c = param("c" + std::to_string(k));
    if (c == 0.0) continue;
    if (half)
      sum += c * factorial(k) / std::pow(s, k + 1);
    else
      sum += c * std::pow(L, k + 1) * special::monomial_exp_moment(k, s * L);
  }
  return A * sum;
}

}  // namespace utm
