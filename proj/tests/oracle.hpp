#pragma once

// Brute-force reference implementations used only by tests. Nothing here
// includes osieve headers: every routine recomputes from trial division.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (u64 d = 3; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

/// p_0 .. p_{count-1} by trial division.
inline std::vector<u64> first_primes(std::size_t count) {
  std::vector<u64> out;
  for (u64 n = 2; out.size() < count; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

/// No p_i (i <= depth) divides n + o for any offset.
inline bool survives(u64 n, std::size_t depth, const std::vector<u64>& offsets,
                     const std::vector<u64>& primes) {
  for (std::size_t i = 0; i <= depth; ++i)
    for (u64 o : offsets)
      if ((n + o) % primes[i] == 0) return false;
  return true;
}

/// Smallest survivor > 1 of N_m by linear scan.
inline u64 minimum(std::size_t m, const std::vector<u64>& offsets, const std::vector<u64>& primes) {
  for (u64 n = 2;; ++n)
    if (survives(n, m, offsets, primes)) return n;
}

inline bool all_prime(u64 z, std::initializer_list<u64> offsets) {
  for (u64 o : offsets)
    if (!is_prime(z + o)) return false;
  return true;
}

inline std::vector<u64> quadruplets(u64 lo, u64 hi) {
  std::vector<u64> out;
  for (u64 z = lo; z <= hi; ++z)
    if (all_prime(z, {0, 2, 6, 8})) out.push_back(z);
  return out;
}

inline std::vector<u64> twin_formers(u64 lo, u64 hi) {
  std::vector<u64> out;
  for (u64 z = lo; z <= hi; ++z)
    if (all_prime(z, {0, 2})) out.push_back(z);
  return out;
}

inline u64 gcd(u64 a, u64 b) {
  while (b) {
    const u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace oracle
