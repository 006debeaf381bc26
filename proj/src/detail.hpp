#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace utm::detail {

/// Indices grouped so that each group's distances lie within a factor of two.
struct Bucket {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> members;
};

inline std::vector<Bucket> bucket_by_octave(std::span<const double> distances) {
  std::vector<std::size_t> order(distances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return distances[a] < distances[b]; });
  std::vector<Bucket> out;
  for (std::size_t i : order) {
    const double d = distances[i];
    if (out.empty() || d > 2.0 * out.back().lo) out.push_back({d, d, {}});
    out.back().hi = d;
    out.back().members.push_back(i);
  }
  return out;
}

}  // namespace utm::detail
