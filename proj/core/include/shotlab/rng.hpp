#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace shotlab {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based 64-bit generator.
///
/// Output i of a stream is a pure function of (key, i), so a stream can be
/// split into independent child streams without consuming parent draws. All
/// derived quantities (uniform reals, bounded integers, permutations) are
/// implemented here rather than with <random> distributions so that results
/// are identical across standard library implementations.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

  std::uint64_t next() noexcept {
    return mix64(key_ ^ mix64(counter_++ + 0x3c6ef372fe94f82bULL));
  }

  /// Child stream `stream`; does not advance this generator.
  [[nodiscard]] CounterRng split(std::uint64_t stream) const noexcept {
    CounterRng child(0);
    child.key_ = mix64(key_ + mix64(stream ^ 0xa54ff53a5f1d36f1ULL));
    return child;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). Unbiased (rejection). n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Fisher-Yates shuffle driven by `rng`.
template <typename T>
void shuffle(std::span<T> values, CounterRng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

/// A uniformly random permutation of 0..n-1.
std::vector<std::size_t> random_permutation(std::size_t n, CounterRng& rng);

}  // namespace shotlab
