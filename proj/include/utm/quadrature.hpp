#pragma once

#include <span>
#include <vector>

namespace utm::quad {

/// Gauss–Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes ascending. Rules are computed once per order and cached.
const Rule& gauss_legendre(int order);

/// A panel [a, b] with a rule mapped onto it.
struct MappedNode {
  double x;
  double w;
};

/// Composite Gauss–Legendre over consecutive edges.
std::vector<MappedNode> composite(std::span<const double> edges, int order);

/// Panel edges on [a, b]: geometric toward `a` (widths doubling from
/// `first_width`) then uniform with width at most `max_width`.
std::vector<double> graded_edges(double a, double b, double first_width, double max_width);

/// Legendre polynomials P_0..P_{n-1} at x.
void legendre_values(double x, std::span<double> out);

}  // namespace utm::quad
