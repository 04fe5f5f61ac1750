#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace pearl {

// 64-bit FNV-1a over raw bytes. Used for config hashes and sub-seed derivation.
std::uint64_t fnv1a64(std::string_view bytes);

// Derives an independent stream seed from a run seed and a component name so
// every pipeline stage (partition, negatives, init, fewshot, ...) draws from
// its own deterministic stream.
std::uint64_t sub_seed(std::uint64_t run_seed, std::string_view name);

// splitmix64. All randomness in the project flows through this generator so
// that serialized artifacts are bit-stable across standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Unbiased integer in [0, bound); bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);

  // Uniform double in [0, 1).
  double next_double();

  // Uniform double in [lo, hi).
  double next_in(double lo, double hi);

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(next_below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // k distinct indices drawn from [0, n) in draw order; k > n yields all n
  // in a shuffled order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::uint64_t state_;
};

}  // namespace pearl
