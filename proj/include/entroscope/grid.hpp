#pragma once

#include <cstddef>
#include <vector>

namespace entroscope {

/// Checkpoints 1, 2, 5, 10, 20, 50, ... no larger than n, always ending at n.
/// Values below `first` are dropped. Empty for n = 0.
inline std::vector<std::size_t> log_grid(std::size_t n, std::size_t first = 10) {
  std::vector<std::size_t> out;
  for (std::size_t decade = 1; decade <= n; decade *= 10) {
    for (std::size_t m : {1, 2, 5}) {
      const std::size_t v = m * decade;
      if (v >= first && v < n) out.push_back(v);
    }
    if (decade > n / 10) break;
  }
  if (n > 0) out.push_back(n);
  return out;
}

}  // namespace entroscope
