#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace spateco {

/// One round of the splitmix64 mixer. Used to derive engine seeds and
/// substream seeds from a user seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic random source: a std::mt19937_64 engine (bit-exact across
/// platforms per the standard) with hand-rolled distribution transforms, since
/// the <random> distribution classes are not pinned by the standard.
///
/// Substreams are derived from (root seed, index) via splitmix64, so replicate
/// parallelism is schedule-independent: replicate k always sees the same
/// stream no matter how work is divided.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : root_(seed) {
    std::uint64_t s = seed;
    engine_.seed(splitmix64(s));
  }

  /// Independent stream identified by (root seed, index). Nested substreams
  /// of distinct parents do not collide for practical workloads.
  Rng substream(std::uint64_t index) const {
    std::uint64_t s = root_ ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    std::uint64_t child = splitmix64(s);
    return Rng(child);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1]; used where log(u) must stay finite.
  double uniform01_open_left() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller. Consumes exactly two engine draws per
  /// call (the sine branch is discarded), keeping stream consumption fixed.
  double normal() {
    const double u1 = uniform01_open_left();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  double lognormal(double meanlog, double sdlog) {
    return std::exp(normal(meanlog, sdlog));
  }

  /// Unbiased integer in [0, n) by rejection.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  /// Fisher-Yates permutation of {0, ..., n-1}.
  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(p[i - 1], p[j]);
    }
    return p;
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t root_;
};

}  // namespace spateco
