#include "utm/contours.hpp"

#include <algorithm>

#include "utm/quadrature.hpp"

namespace utm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGaussianTarget = 40.0;     // e^{-40} ≈ 4e-18
constexpr double kExponentialTarget = 32.0;  // e^{-32} ≈ 1e-14, before the 1/|λ| factor

// Radial panel edges on [r0, Λ] for a leg at angle θ.
std::vector<double> leg_edges(double theta, double r0, double lambda_max, int panels,
                              const Refinement& refine) {
  int levels = panels;
  if (refine.inner_radius > 0.0 && lambda_max > refine.inner_radius)
    levels = std::max(levels, static_cast<int>(std::ceil(std::log2(lambda_max / refine.inner_radius))) + 1);

  std::vector<double> geometric;
  for (int j = levels - 1; j >= 1; --j) {
    const double e = std::ldexp(lambda_max, -j);
    if (e > r0) geometric.push_back(e);
  }
  geometric.insert(geometric.begin(), r0);
  geometric.push_back(lambda_max);

  // Beyond the chirp radius e^{-λ²t} is negligible and its phase need not be resolved.
  auto cap_at = [&](double a, double b) {
    double cap = std::numeric_limits<double>::infinity();
    const double c = refine.phase_per_panel;
    if (refine.oscillation_distance > 0.0)
      cap = std::min(cap, c / (std::cos(theta) * refine.oscillation_distance));
    if (refine.chirp_time > 0.0 && refine.chirp_radius > a) {
      const double rate = 2.0 * std::min(b, refine.chirp_radius) * std::sin(2.0 * theta) * refine.chirp_time;
      if (rate > 0.0) cap = std::min(cap, c / rate);
    }
    return cap;
  };

  std::vector<double> edges{geometric.front()};
  for (std::size_t p = 0; p + 1 < geometric.size(); ++p) {
    const double a = geometric[p], b = geometric[p + 1];
    const double cap = cap_at(a, b);
    const int pieces = std::isfinite(cap) ? std::max(1, static_cast<int>(std::ceil((b - a) / cap))) : 1;
    require(pieces <= 1000000, "contour refinement requests too many panels");
    for (int s = 1; s <= pieces; ++s) edges.push_back(a + (b - a) * s / pieces);
  }
  return edges;
}

}  // namespace

const char* to_string(ContourKind kind) {
  switch (kind) {
    case ContourKind::d_plus: return "D_plus";
    case ContourKind::d_minus: return "D_minus";
    case ContourKind::real_line: return "real_line";
  }
  return "?";
}

Contour build_contour(ContourKind kind, double theta, double lambda_max, int panels_per_leg,
                      double indent, const Refinement& refine, int order) {
  require(kind != ContourKind::real_line, "use build_real_line for the real axis");
  require(theta > 0.0 && theta < kPi / 2.0, "leg angle θ must lie in (0, π/2)");
  require(std::isfinite(lambda_max) && lambda_max > 0.0, "Λmax must be positive");
  require(panels_per_leg >= 1, "panels_per_leg must be ≥ 1");
  require(indent >= 0.0 && indent < lambda_max, "indent radius must satisfy 0 ≤ ρ < Λmax");

  const std::vector<double> edges = leg_edges(theta, indent, lambda_max, panels_per_leg, refine);
  const auto radial = quad::composite(edges, order);

  Contour c;
  c.kind = ContourKind::d_plus;
  c.theta = theta;
  c.lambda_max = lambda_max;
  c.indent = indent;

  const cplx left_dir = std::polar(1.0, kPi - theta);
  const cplx right_dir = std::polar(1.0, theta);

  // Left leg, inbound: λ = s e^{i(π−θ)}, s from Λ down to ρ.
  for (auto it = radial.rbegin(); it != radial.rend(); ++it) {
    c.nodes.push_back(it->x * left_dir);
    c.weights.push_back(-it->w * left_dir);
  }
  // Indentation arc above the origin: φ from π−θ down to θ.
  if (indent > 0.0) {
    const int arc_panels = 2;
    std::vector<double> arc_edges(arc_panels + 1);
    for (int j = 0; j <= arc_panels; ++j) arc_edges[j] = theta + (kPi - 2.0 * theta) * j / arc_panels;
    const auto arc = quad::composite(arc_edges, order);
    for (auto it = arc.rbegin(); it != arc.rend(); ++it) {
      const cplx z = std::polar(indent, it->x);
      c.nodes.push_back(z);
      c.weights.push_back(-it->w * cplx{0.0, 1.0} * z);
    }
  }
  // Right leg, outbound.
  for (const auto& node : radial) {
    c.nodes.push_back(node.x * right_dir);
    c.weights.push_back(node.w * right_dir);
  }

  if (kind == ContourKind::d_minus) {
    c.kind = ContourKind::d_minus;
    c.orientation = -1;
    for (auto& z : c.nodes) z = std::conj(z);
    for (auto& w : c.weights) w = -std::conj(w);
  }
  return c;
}

Contour build_real_line(double lambda_max, int panels_per_half, const Refinement& refine, int order) {
  require(std::isfinite(lambda_max) && lambda_max > 0.0, "Λmax must be positive");
  require(panels_per_half >= 1, "panels must be ≥ 1");
  // θ = 0 legs: no chirp from e^{-λ² t} on the real axis.
  Refinement r = refine;
  r.chirp_time = 0.0;
  const std::vector<double> edges = leg_edges(0.0, 0.0, lambda_max, panels_per_half, r);
  const auto radial = quad::composite(edges, order);

  Contour c;
  c.kind = ContourKind::real_line;
  c.theta = 0.0;
  c.lambda_max = lambda_max;
  for (auto it = radial.rbegin(); it != radial.rend(); ++it) {
    c.nodes.emplace_back(-it->x, 0.0);
    c.weights.emplace_back(it->w, 0.0);
  }
  for (const auto& node : radial) {
    c.nodes.emplace_back(node.x, 0.0);
    c.weights.emplace_back(node.w, 0.0);
  }
  return c;
}

double pole_clearance(const Contour& c, double L) {
  double best = std::numeric_limits<double>::infinity();
  for (const cplx& z : c.nodes) {
    double n = std::round(z.real() * L / kPi);
    if (n == 0.0) n = z.real() >= 0.0 ? 1.0 : -1.0;
    best = std::min(best, std::abs(z - cplx{n * kPi / L, 0.0}));
  }
  return best;
}

double gaussian_lambda_max(double theta, double t) {
  require(t > 0.0, "time must be positive");
  const double c = std::cos(2.0 * theta);
  require(c > 0.0, "leg angle must satisfy θ < π/4 for e^{-λ²t} decay");
  return std::sqrt(kGaussianTarget / (t * c));
}

double exponential_lambda_max(double theta, double distance) {
  require(distance > 0.0, "decay distance must be positive");
  return kExponentialTarget / (std::sin(theta) * distance);
}

}  // namespace utm
