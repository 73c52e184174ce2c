// combinatorics.hpp — binomials, integer roots, and k-subset ranking.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace clawsim {

// C(n, k), exact; throws std::overflow_error past the int64 range.
inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (n < 0) throw std::invalid_argument("binomial: n must be non-negative");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (acc > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max()))
      throw std::overflow_error("binomial: result exceeds int64 range");
  }
  return static_cast<std::int64_t>(acc);
}

// Smallest e >= 0 with 2^e >= x (x >= 1).
inline std::int64_t ceil_log2(std::int64_t x) {
  if (x < 1) throw std::invalid_argument("ceil_log2: x must be positive");
  std::int64_t e = 0;
  std::int64_t v = 1;
  while (v < x) {
    v <<= 1;
    ++e;
  }
  return e;
}

// Smallest e >= 0 with 3^e >= x (x >= 1).
inline std::int64_t ceil_log3(std::int64_t x) {
  if (x < 1) throw std::invalid_argument("ceil_log3: x must be positive");
  std::int64_t e = 0;
  std::int64_t v = 1;
  while (v < x) {
    v *= 3;
    ++e;
  }
  return e;
}

namespace detail {
// v^r compared against bound without overflow; true iff v^r >= bound.
inline bool pow_at_least(std::int64_t v, int r, unsigned __int128 bound) {
  unsigned __int128 acc = 1;
  for (int i = 0; i < r; ++i) {
    acc *= static_cast<unsigned __int128>(v);
    if (acc >= bound) return true;
  }
  return acc >= bound;
}
}  // namespace detail

// Smallest v >= 1 with v^r >= x; exact for perfect powers.
inline std::int64_t ceil_root(std::int64_t x, int r) {
  if (x < 1 || r < 1) throw std::invalid_argument("ceil_root: x and r must be positive");
  std::int64_t lo = 1, hi = x;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (detail::pow_at_least(mid, r, static_cast<unsigned __int128>(x)))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

// Lexicographic rank of a sorted k-subset of {0..n-1}.
inline std::int64_t subset_rank(std::span<const std::int32_t> subset, std::int64_t n) {
  const std::int64_t k = static_cast<std::int64_t>(subset.size());
  std::int64_t rank = 0;
  std::int64_t prev = -1;
  for (std::int64_t i = 0; i < k; ++i) {
    for (std::int64_t x = prev + 1; x < subset[static_cast<std::size_t>(i)]; ++x)
      rank += binomial(n - 1 - x, k - 1 - i);
    prev = subset[static_cast<std::size_t>(i)];
  }
  return rank;
}

// Inverse of subset_rank; writes the sorted subset into `out` (length k).
inline void subset_unrank(std::int64_t rank, std::int64_t n, std::int64_t k,
                          std::int32_t* out) {
  std::int64_t prev = -1;
  for (std::int64_t i = 0; i < k; ++i) {
    for (std::int64_t x = prev + 1; x < n; ++x) {
      const std::int64_t cnt = binomial(n - 1 - x, k - 1 - i);
      if (rank < cnt) {
        out[i] = static_cast<std::int32_t>(x);
        prev = x;
        break;
      }
      rank -= cnt;
    }
  }
}

// Advance a sorted k-subset of {0..n-1} to its lexicographic successor.
inline bool next_subset(std::int32_t* s, std::int64_t n, std::int64_t k) {
  for (std::int64_t i = k - 1; i >= 0; --i) {
    if (s[i] < n - k + i) {
      ++s[i];
      for (std::int64_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace clawsim
