#pragma once

#include <cstddef>
#include <vector>

namespace nlus {

/// intervals + 1 uniform points on [lo, hi]; the last point is exactly hi.
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t intervals) {
  std::vector<double> g(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i)
    g[i] = i == intervals ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(intervals);
  return g;
}

}  // namespace nlus
