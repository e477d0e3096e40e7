#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace shrinklearn {

// Seed derivation and Gaussian sampling are pinned down explicitly so that a
// given (seed, stream) pair produces the same bytes on every standard library.
// std::mt19937_64 output is fixed by the standard; the distributions are not,
// so we roll our own on top of the raw 64-bit stream.

/// SplitMix64 finalizer, used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for sub-stream `stream` of `master`. Chaining splitmix keeps distinct
/// (master, stream) pairs on distinct trajectories.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x51bd1e8ULL));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b) {
  return derive_seed(derive_seed(master, a), b);
}

/// Deterministic double in [0, 1) from one engine draw (53 mantissa bits).
template <class Engine>
double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; consumes exactly two engine draws.
template <class Engine>
double standard_normal(Engine& eng) {
  // Shift into (0, 1] so the log is finite.
  const double u1 = (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

/// Unbiased integer in [0, bound) via rejection sampling.
template <class Engine>
std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) {
  const std::uint64_t limit =
      ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
  std::uint64_t x = eng();
  while (x > limit) x = eng();
  return x % bound;
}

using RngEngine = std::mt19937_64;

inline RngEngine make_engine(std::uint64_t seed) { return RngEngine(seed); }

}  // namespace shrinklearn
