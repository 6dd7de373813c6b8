#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace tenreg {

// All randomness in the library flows from one 64-bit root seed. Substreams
// are derived by mixing purpose tags into the root with a splitmix64
// finalizer, so adding a new consumer never perturbs existing draws.

namespace detail {
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
} // namespace detail

/// Stream tags for seed derivation. Fixed values; order is part of the
/// on-disk reproducibility contract.
enum class Stream : std::uint64_t {
  LatinHypercube = 1,
  MonteCarlo = 2,
  SolverInit = 3,
  Voronoi = 4,
  Moments = 5,
  PickFreeze = 6,
  TestSet = 7,
  Planted = 8,
  CrossValidation = 9,
};

/// Derives a child seed from a root seed and a tag path.
inline std::uint64_t derive_seed(std::uint64_t root,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = root;
  for (std::uint64_t t : path) {
    std::uint64_t tag_state = t;
    s ^= detail::splitmix64_next(tag_state) + 0x9E3779B97F4A7C15ull + (s << 6) +
         (s >> 2);
    s = detail::splitmix64_next(s);
  }
  return s;
}

inline std::uint64_t derive_seed(std::uint64_t root, Stream stream,
                                 std::uint64_t index = 0) {
  return derive_seed(root, {static_cast<std::uint64_t>(stream), index});
}

/// Deterministic generator: the mt19937_64 engine is fully specified by the
/// standard, and all conversions below are explicit, so sequences are
/// bit-identical across platforms. Never draws from std:: distributions
/// (their output is implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in the open interval (0, 1); safe as a quantile argument.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

private:
  std::mt19937_64 engine_;
};

} // namespace tenreg
