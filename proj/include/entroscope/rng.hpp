#pragma once

#include <cstdint>
#include <random>

namespace entroscope {

/// Reproducible random stream.
///
/// The engine is std::mt19937_64, whose output sequence the standard fixes,
/// seeded through SplitMix64. Conversions to doubles are done here rather
/// than by <random> distributions, whose algorithms vary between standard
/// libraries, so a seed yields the same samples on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }
  /// Standard normal (Box-Muller).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Independent seed for replica `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace entroscope
