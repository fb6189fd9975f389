#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace minirel {

// Portable deterministic RNG. std::mt19937_64 output is pinned by the
// standard; the std::uniform_* distributions are not, so bounded draws and
// shuffles are implemented here to make seeded results identical across
// compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased integer in [0, n).
  std::uint64_t bounded(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = next_u64();
    } while (r >= limit);
    return r % n;
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[bounded(i)]);
    }
  }

  // k distinct indices from [0, n), ascending.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

// Stateless mix for deriving independent child seeds from (seed, salt).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace minirel
