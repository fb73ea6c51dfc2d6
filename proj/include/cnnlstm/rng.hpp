#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace cnnlstm {

/// All randomness flows through this engine. std::mt19937_64 has a fully
/// specified output sequence, so seeded streams agree across platforms as
/// long as we avoid the implementation-defined <random> distributions.
using Rng = std::mt19937_64;

inline constexpr std::string_view kPrngName = "mt19937_64";

/// splitmix64 finalizer; used to derive independent sub-stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

/// Uniform double in [lo, hi).
double uniform(Rng& rng, double lo, double hi);

/// Unbiased integer in [0, bound) by rejection sampling. bound must be > 0.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

/// Fisher-Yates shuffle using uniform_index.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

/// The permutation 0..n-1 shuffled with a fresh engine seeded by `seed`.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

}  // namespace cnnlstm
