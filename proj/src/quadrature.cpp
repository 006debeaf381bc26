#include "utm/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "utm/error.hpp"

namespace utm::quad {

namespace {

Rule compute_rule(int n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const Rule& gauss_legendre(int order) {
  require(order >= 1 && order <= 256, "Gauss-Legendre order must be in [1, 256]");
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

std::vector<MappedNode> composite(std::span<const double> edges, int order) {
  const Rule& rule = gauss_legendre(order);
  std::vector<MappedNode> out;
  if (edges.size() < 2) return out;
  out.reserve((edges.size() - 1) * order);
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], b = edges[p + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int j = 0; j < order; ++j)
      out.push_back({mid + half * rule.nodes[j], half * rule.weights[j]});
  }
  return out;
}

std::vector<double> graded_edges(double a, double b, double first_width, double max_width) {
  std::vector<double> edges{a};
  if (!(b > a)) return edges;
  double width = std::min(first_width, max_width);
  double x = a;
  while (x < b) {
    double next = x + width;
    if (next >= b || (b - next) < 0.25 * width) next = b;
    edges.push_back(next);
    x = next;
    width = std::min(2.0 * width, max_width);
  }
  return edges;
}

void legendre_values(double x, std::span<double> out) {
  const std::size_t n = out.size();
  if (n == 0) return;
  out[0] = 1.0;
  if (n == 1) return;
  out[1] = x;
  for (std::size_t k = 2; k < n; ++k)
    out[k] = ((2.0 * k - 1.0) * x * out[k - 1] - (k - 1.0) * out[k - 2]) / static_cast<double>(k);
}

}  // namespace utm::quad
