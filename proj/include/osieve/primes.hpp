#pragma once

// Prime generation and exact primality testing.
//
// Primes are indexed from zero: p_0 = 2, p_1 = 3, p_2 = 5, ...  Most prime
// libraries count from one; everything in osieve uses the zero-based index.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "osieve/errors.hpp"

namespace osieve {

using u64 = std::uint64_t;

/// Integer square root (floor).
constexpr u64 isqrt(u64 n) noexcept {
  if (n < 2) return n;
  u64 x = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (x > 0 && x > n / x) --x;
  while ((x + 1) <= n / (x + 1)) ++x;
  return x;
}

/// Ascending list of every prime <= limit. Immutable once built.
class PrimeTable {
 public:
  PrimeTable() = default;
  PrimeTable(u64 limit, std::vector<u64> primes)
      : limit_(limit), primes_(std::move(primes)) {}

  [[nodiscard]] u64 limit() const noexcept { return limit_; }
  [[nodiscard]] std::size_t size() const noexcept { return primes_.size(); }
  [[nodiscard]] bool empty() const noexcept { return primes_.empty(); }
  [[nodiscard]] std::span<const u64> values() const noexcept { return primes_; }
  [[nodiscard]] u64 operator[](std::size_t m) const { return primes_[m]; }
  [[nodiscard]] u64 back() const { return primes_.back(); }

  /// n <= limit() is required; larger n are reported as not contained.
  [[nodiscard]] bool contains(u64 n) const {
    return std::binary_search(primes_.begin(), primes_.end(), n);
  }

  /// Number of primes <= n, for n <= limit().
  [[nodiscard]] std::size_t count_up_to(u64 n) const {
    return static_cast<std::size_t>(
        std::upper_bound(primes_.begin(), primes_.end(), n) - primes_.begin());
  }

 private:
  u64 limit_ = 0;
  std::vector<u64> primes_;
};

namespace detail {

// Odd-only segmented Eratosthenes. Appends primes in (0, limit] to out.
inline void eratosthenes(u64 limit, std::vector<u64>& out) {
  if (limit < 2) return;
  out.push_back(2);
  if (limit < 3) return;

  const u64 root = isqrt(limit);
  std::vector<std::uint8_t> small((root >> 1) + 1, 1);  // small[i] <-> 2i+1
  std::vector<u64> base;
  for (u64 i = 1; 2 * i + 1 <= root; ++i) {
    if (!small[i]) continue;
    const u64 p = 2 * i + 1;
    base.push_back(p);
    for (u64 j = (p * p) >> 1; j < small.size(); j += p) small[j] = 0;
  }

  // Segment over odd numbers; index k represents 2k+1.
  constexpr u64 kSegment = u64{1} << 18;
  const u64 last = (limit - 1) >> 1;  // index of largest odd <= limit
  std::vector<std::uint8_t> seg(kSegment);
  std::vector<u64> next(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) next[i] = (base[i] * base[i]) >> 1;

  for (u64 lo = 1; lo <= last; lo += kSegment) {
    const u64 hi = std::min(lo + kSegment - 1, last);
    const u64 len = hi - lo + 1;
    std::fill_n(seg.begin(), len, std::uint8_t{1});
    for (std::size_t i = 0; i < base.size(); ++i) {
      const u64 p = base[i];
      u64 j = next[i];
      if (j > hi) continue;
      for (j -= lo; j < len; j += p) seg[j] = 0;
      next[i] = j + lo;
    }
    for (u64 k = 0; k < len; ++k)
      if (seg[k]) out.push_back(2 * (lo + k) + 1);
  }
}

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace detail

/// All primes <= limit. Throws std::domain_error when limit < 2.
inline PrimeTable primes_up_to(u64 limit) {
  if (limit < 2) throw std::domain_error("primes_up_to: limit must be >= 2");
  std::vector<u64> out;
  if (limit > 100) {
    const double est = 1.26 * static_cast<double>(limit) / std::log(static_cast<double>(limit));
    out.reserve(static_cast<std::size_t>(est));
  }
  detail::eratosthenes(limit, out);
  return PrimeTable(limit, std::move(out));
}

/// Exact primality for every 64-bit n. Trial division by small primes,
/// then Miller-Rabin with the first twelve prime bases, which is
/// deterministic below 3.3e24.
inline bool is_prime(u64 n) {
  constexpr u64 kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (n < 2) return false;
  for (u64 p : kSmall) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 41 * 41) return true;

  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kSmall) {
    u64 x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Smallest prime strictly greater than n.
inline u64 next_prime(u64 n) {
  if (n < 2) return 2;
  u64 c = n + 1;
  if (c > 2 && c % 2 == 0) ++c;
  while (!is_prime(c)) c += 2;
  return c;
}

/// Largest prime strictly less than n; n must exceed 2.
inline u64 prev_prime(u64 n) {
  if (n <= 2) throw std::domain_error("prev_prime: no prime below 2");
  if (n == 3) return 2;
  u64 c = n - 1;
  if (c % 2 == 0) --c;
  while (!is_prime(c)) c -= 2;
  return c;
}

/// Process-wide growable prime table behind nth_prime().
///
/// Readers take a shared_ptr snapshot and never observe mutation; growth
/// builds a larger table and swaps the pointer under an exclusive lock.
class PrimeCache {
 public:
  /// Hard cap on the sieved limit (about 54 million primes).
  static constexpr u64 kDefaultCap = u64{1} << 30;

  explicit PrimeCache(u64 cap = kDefaultCap) : cap_(cap) {}

  static PrimeCache& shared() {
    static PrimeCache cache;
    return cache;
  }

  /// Snapshot holding at least p_0..p_m.
  std::shared_ptr<const PrimeTable> covering_index(std::size_t m) {
    {
      std::shared_lock lock(mutex_);
      if (table_ && table_->size() > m) return table_;
    }
    std::unique_lock lock(mutex_);
    u64 limit = table_ ? table_->limit() : u64{1} << 16;
    while (!table_ || table_->size() <= m) {
      // p_m < m (ln m + ln ln m) for m >= 6; pad and double until it fits.
      const double mm = static_cast<double>(m) + 6.0;
      const u64 est = static_cast<u64>(mm * (std::log(mm) + std::log(std::log(mm)))) + 64;
      limit = std::max({limit, est, table_ ? table_->limit() * 2 : u64{0}});
      if (limit > cap_) {
        if (table_ && table_->limit() >= cap_)
          throw resource_error("nth_prime: index " + std::to_string(m) +
                               " beyond prime cache cap " + std::to_string(cap_));
        limit = cap_;
      }
      table_ = std::make_shared<const PrimeTable>(primes_up_to(limit));
    }
    return table_;
  }

  /// Snapshot holding every prime <= n.
  std::shared_ptr<const PrimeTable> covering_value(u64 n) {
    {
      std::shared_lock lock(mutex_);
      if (table_ && table_->limit() >= n) return table_;
    }
    if (n > cap_)
      throw resource_error("prime cache: value " + std::to_string(n) + " beyond cap " +
                           std::to_string(cap_));
    std::unique_lock lock(mutex_);
    if (!table_ || table_->limit() < n) {
      u64 limit = std::max<u64>(n, table_ ? std::min(cap_, table_->limit() * 2) : 1u << 16);
      table_ = std::make_shared<const PrimeTable>(primes_up_to(limit));
    }
    return table_;
  }

  [[nodiscard]] u64 cap() const noexcept { return cap_; }

 private:
  u64 cap_;
  std::shared_mutex mutex_;
  std::shared_ptr<const PrimeTable> table_;
};

/// p_m with p_0 = 2. Grows the shared cache on demand; throws
/// resource_error past the cache cap.
inline u64 nth_prime(std::size_t m) { return (*PrimeCache::shared().covering_index(m))[m]; }

/// First count primes p_0..p_{count-1}.
inline std::vector<u64> first_primes(std::size_t count) {
  if (count == 0) return {};
  auto table = PrimeCache::shared().covering_index(count - 1);
  auto v = table->values();
  return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(count)};
}

/// Number of primes <= x.
inline std::size_t prime_pi(u64 x) {
  if (x < 2) return 0;
  return PrimeCache::shared().covering_value(x)->count_up_to(x);
}

/// Zero-based index of prime p (p must be prime).
inline std::size_t prime_index(u64 p) {
  auto table = PrimeCache::shared().covering_value(p);
  if (!table->contains(p)) throw std::domain_error(std::to_string(p) + " is not prime");
  return table->count_up_to(p) - 1;
}

}  // namespace osieve
