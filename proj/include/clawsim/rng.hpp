// rng.hpp — counter-based splittable random streams.
//
// Every trial of every experiment derives its own generator from
// (seed, point, trial, purpose), so results never depend on execution order
// and any single trial can be replayed in isolation.

#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace clawsim {

// SplitMix64: one 64-bit counter word, one finalizer round per draw.
struct SplitMix64 {
  using result_type = std::uint64_t;

  std::uint64_t state = 0;

  SplitMix64() = default;
  explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xFFFFFFFFFFFFFFFFull; }

  constexpr result_type operator()() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

constexpr std::uint64_t mix_bits(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xFF51AFD7ED558CCDull;
  z ^= z >> 33;
  z *= 0xC4CEB9FE1A85EC53ull;
  z ^= z >> 33;
  return z;
}

// Independent stream addressed by up to three integer coordinates.
constexpr SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t a = 0,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = mix_bits(seed + 0x243F6A8885A308D3ull);
  s = mix_bits(s ^ (a + 0x452821E638D01377ull));
  s = mix_bits(s ^ (b + 0x13198A2E03707344ull));
  s = mix_bits(s ^ (c + 0xA4093822299F31D0ull));
  return SplitMix64{s};
}

// Unbiased draw from [0, n). Rejection keeps the map exact for every n.
inline std::uint64_t uniform_below(SplitMix64& g, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t x = g();
    if (x >= threshold) return x % n;
  }
}

// Inclusive integer range.
inline std::int64_t uniform_int(SplitMix64& g, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
  return lo + static_cast<std::int64_t>(
                  uniform_below(g, static_cast<std::uint64_t>(hi - lo) + 1));
}

// Uniform double in [0, 1) with 53 significant bits.
inline double uniform_unit(SplitMix64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle_in_place(SplitMix64& g, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(g, i));
    std::swap(v[i - 1], v[j]);
  }
}

// k distinct values from [0, n), ascending (Floyd's sampling).
inline std::vector<std::int64_t> sample_distinct(SplitMix64& g, std::int64_t n,
                                                 std::int64_t k) {
  if (k < 0 || k > n) throw std::invalid_argument("sample_distinct: need 0 <= k <= n");
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(k));
  std::unordered_set<std::int64_t> seen;
  seen.reserve(static_cast<std::size_t>(k) * 2);
  for (std::int64_t j = n - k; j < n; ++j) {
    const std::int64_t t =
        static_cast<std::int64_t>(uniform_below(g, static_cast<std::uint64_t>(j) + 1));
    const std::int64_t pick = seen.insert(t).second ? t : j;
    if (pick != t) seen.insert(pick);
    out.push_back(pick);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace clawsim
