#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace nin::sim {

/// Seeded generator with platform-independent output. std::mt19937_64 is
/// fully specified by the standard; the distributions are not, so range
/// reduction is done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Uniform in [0, 1).
  double unit();

  /// Independent stream derived from this generator's seed and a name.
  static Rng derive(std::uint64_t seed, std::string_view name);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

}  // namespace nin::sim
