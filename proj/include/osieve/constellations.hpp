#pragma once

// Direct enumeration of twin primes and prime quadruplets {z, z+2, z+6, z+8}
// from plain prime bitmaps. Nothing here goes through SievePlan, so these
// routines serve as the oracle for claims derived from the offset sieve.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "osieve/errors.hpp"
#include "osieve/minfunc.hpp"
#include "osieve/offset_system.hpp"
#include "osieve/parallel.hpp"
#include "osieve/primes.hpp"

namespace osieve {

/// Byte-per-value primality map over [lo, hi].
class PrimeBitmap {
 public:
  /// base must contain every prime <= sqrt(hi).
  PrimeBitmap(u64 lo, u64 hi, std::span<const u64> base) : lo_(lo), hi_(hi), flags_(hi - lo + 1, 1) {
    if (lo > hi) throw std::domain_error("PrimeBitmap: lo > hi");
    for (u64 n = lo; n <= std::min<u64>(hi, 1); ++n) flags_[n - lo] = 0;
    for (u64 p : base) {
      if (p * p > hi) break;
      u64 start = std::max(p * p, (lo + p - 1) / p * p);
      for (u64 j = start; j <= hi; j += p) flags_[j - lo] = 0;
    }
  }

  PrimeBitmap(u64 lo, u64 hi) : PrimeBitmap(lo, hi, base_for(hi)) {}

  [[nodiscard]] u64 lo() const noexcept { return lo_; }
  [[nodiscard]] u64 hi() const noexcept { return hi_; }
  [[nodiscard]] bool test(u64 n) const { return flags_[n - lo_] != 0; }

  static std::vector<u64> base_for(u64 hi) {
    const u64 root = isqrt(hi);
    if (root < 2) return {};
    const PrimeTable table = primes_up_to(root);
    return {table.values().begin(), table.values().end()};
  }

 private:
  u64 lo_;
  u64 hi_;
  std::vector<std::uint8_t> flags_;
};

/// A constellation start z with the forward difference to the next start
/// in the enumerated range (absent for the last one).
struct ConstellationRecord {
  u64 start = 0;
  std::optional<u64> gap_to_next;

  friend bool operator==(const ConstellationRecord&, const ConstellationRecord&) = default;
};

namespace detail {

inline constexpr u64 kMaxConstellationValue = u64{1} << 40;

/// Ascending z in [lo, hi] with z + o prime for all o in offsets.
inline std::vector<u64> constellation_starts(u64 lo, u64 hi, std::span<const u64> offsets,
                                             const ScanOptions& opts) {
  if (lo > hi) throw std::domain_error("constellation range: lo > hi");
  const u64 span_ = offsets.back();
  if (hi > kMaxConstellationValue) throw resource_error("constellation range beyond 2^40");
  const auto base = PrimeBitmap::base_for(hi + span_);
  auto parts = map_chunks(lo, hi, opts.segment_size, opts.threads, [&](u64 a, u64 b) {
    const PrimeBitmap bits(a, b + span_, base);
    std::vector<u64> found;
    for (u64 z = a; z <= b; ++z) {
      bool all = true;
      for (u64 o : offsets)
        if (!bits.test(z + o)) {
          all = false;
          break;
        }
      if (all) found.push_back(z);
    }
    return found;
  });
  std::vector<u64> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline std::vector<ConstellationRecord> with_gaps(const std::vector<u64>& starts) {
  std::vector<ConstellationRecord> out;
  out.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    ConstellationRecord r{starts[i], std::nullopt};
    if (i + 1 < starts.size()) r.gap_to_next = starts[i + 1] - starts[i];
    out.push_back(r);
  }
  return out;
}

}  // namespace detail

/// p in [lo, hi] with p and p + 2 prime.
inline std::vector<u64> twin_formers(u64 lo, u64 hi, const ScanOptions& opts = {}) {
  constexpr u64 kTwin[] = {0, 2};
  return detail::constellation_starts(lo, hi, kTwin, opts);
}

/// Consecutive twin formers <= limit with forward differences. The last
/// former has no gap; it is never extrapolated past limit.
inline std::vector<ConstellationRecord> gap_table(u64 limit, const ScanOptions& opts = {}) {
  if (limit < 5) throw std::domain_error("gap_table: limit must be >= 5");
  return detail::with_gaps(twin_formers(2, limit, opts));
}

/// z in [lo, hi] with z, z+2, z+6, z+8 all prime; gaps are to the next start in range.
inline std::vector<ConstellationRecord> quadruplets(u64 lo, u64 hi, const ScanOptions& opts = {}) {
  constexpr u64 kQuad[] = {0, 2, 6, 8};
  return detail::with_gaps(detail::constellation_starts(lo, hi, kQuad, opts));
}

struct DecadeCount {
  int exponent = 0;  ///< counts starts in (10^exponent, 10^(exponent+1))
  u64 count = 0;

  friend bool operator==(const DecadeCount&, const DecadeCount&) = default;
};

struct DecadeOptions {
  int ceiling = 8;  ///< largest allowed d_hi without allow_beyond_ceiling
  bool allow_beyond_ceiling = false;
  std::ostream* warnings = nullptr;
  ScanOptions scan;
};

namespace detail {

inline u64 pow10(int d) {
  u64 v = 1;
  for (int i = 0; i < d; ++i) v *= 10;
  return v;
}

/// Odd-only bitset of primes over [lo, hi]; lo is odd, bit k <-> lo + 2k.
class OddPrimeBits {
 public:
  OddPrimeBits(u64 lo, u64 hi, std::span<const u64> base)
      : lo_(lo), words_(static_cast<std::size_t>((hi - lo) / 2 / 64 + 1), ~u64{0}) {
    const u64 bits = (hi - lo) / 2 + 1;
    if (bits % 64) words_.back() = (u64{1} << (bits % 64)) - 1;
    for (u64 p : base) {
      if (p == 2) continue;
      if (p * p > hi) break;
      u64 first = std::max(p * p, (lo + p - 1) / p * p);
      if (first % 2 == 0) first += p;
      for (u64 k = (first - lo) / 2; k < bits; k += p) words_[k >> 6] &= ~(u64{1} << (k & 63));
    }
    if (lo == 1) words_[0] &= ~u64{1};
  }
  [[nodiscard]] bool test(u64 n) const {
    const u64 k = (n - lo_) / 2;
    return (words_[k >> 6] >> (k & 63)) & 1u;
  }

 private:
  u64 lo_;
  std::vector<u64> words_;
};

}  // namespace detail

/// Quadruplet starts per decade (10^d, 10^(d+1)) for d in [d_lo, d_hi].
/// Streams odd-only prime bitsets segment by segment and only counts, a
/// separate code path from quadruplets().
inline std::vector<DecadeCount> decade_histogram(int d_lo, int d_hi, const DecadeOptions& opts = {}) {
  if (d_lo < 3 || d_lo > d_hi) throw std::domain_error("decade_histogram: need 3 <= d_lo <= d_hi");
  if (d_hi > opts.ceiling) {
    if (!opts.allow_beyond_ceiling)
      throw resource_error("decade 10^" + std::to_string(d_hi) + " exceeds ceiling 10^" +
                           std::to_string(opts.ceiling));
    if (opts.warnings)
      *opts.warnings << "warning: decade exponent " << d_hi << " above ceiling " << opts.ceiling
                     << "; this needs a prime bitmap to 10^" << d_hi + 1 << "\n";
  }
  if (d_hi > 12) throw resource_error("decade exponent above 12 is not supported");

  const u64 top = detail::pow10(d_hi + 1) + 8;
  const auto base = PrimeBitmap::base_for(top);
  std::vector<DecadeCount> out;
  for (int d = d_lo; d <= d_hi; ++d) {
    const u64 lo = detail::pow10(d) + 1;       // odd
    const u64 hi = detail::pow10(d + 1) - 1;   // odd
    const u64 chunk = std::max<u64>(opts.scan.segment_size & ~u64{1}, 2);
    auto counts = map_chunks(lo, hi, chunk, opts.scan.threads, [&](u64 a, u64 b) {
      if (a % 2 == 0) ++a;
      if (a > b) return u64{0};
      const detail::OddPrimeBits bits(a, b + 8, base);
      u64 c = 0;
      for (u64 z = a; z <= b; z += 2)
        if (bits.test(z) && bits.test(z + 2) && bits.test(z + 6) && bits.test(z + 8)) ++c;
      return c;
    });
    u64 total = 0;
    for (u64 c : counts) total += c;
    out.push_back({d, total});
  }
  return out;
}

/// Birth and death time of a quadruplet starting at z: death is z itself,
/// birth is the largest prime below sqrt(z + 10).
struct LifeSpan {
  u64 z = 0;
  u64 birth_prime = 0;       ///< p_h
  u64 death_prime = 0;       ///< p_l = z
  u64 next_after_birth = 0;  ///< p_{h+1}, smallest prime >= sqrt(z + 10)

  friend bool operator==(const LifeSpan&, const LifeSpan&) = default;
};

inline bool is_quadruplet_start(u64 z) {
  return is_prime(z) && is_prime(z + 2) && is_prime(z + 6) && is_prime(z + 8);
}

inline LifeSpan life_span(u64 z) {
  if (!is_quadruplet_start(z))
    throw std::domain_error(std::to_string(z) + " does not start a prime quadruplet");
  const u64 root = isqrt(z + 9);  // largest r with r^2 < z + 10
  LifeSpan s;
  s.z = z;
  s.death_prime = z;
  s.birth_prime = is_prime(root) ? root : prev_prime(root);
  s.next_after_birth = next_prime(s.birth_prime);
  return s;
}

/// Cross-check of quad-sieve jump values against brute-force quadruplets.
struct Theorem71Report {
  u64 limit = 0;
  std::vector<u64> jump_values;          ///< n_{m-1,1} >= 5 at each jump, <= limit
  std::vector<u64> quadruplet_starts;    ///< brute force, [5, limit]
  std::vector<u64> jumps_not_quadruplets;
  std::vector<u64> quadruplets_not_jumps;
  std::vector<u64> differences;          ///< w_i - w_{i-1}
  bool first_difference_is_6 = false;
  std::vector<std::size_t> spacing_violations;  ///< i > 1 with w_i - w_{i-1} < 30
  bool bound_exceeded = false;

  [[nodiscard]] bool ok() const noexcept {
    return jumps_not_quadruplets.empty() && quadruplets_not_jumps.empty() &&
           (jump_values.size() < 2 || first_difference_is_6) && spacing_violations.empty() &&
           !bound_exceeded;
  }
};

inline Theorem71Report verify_theorem_71(u64 limit, const ScanOptions& opts = {}) {
  if (limit < 5) throw std::domain_error("verify_theorem_71: limit must be >= 5");
  Theorem71Report rep;
  rep.limit = limit;

  const OffsetSystem quad = OffsetSystem::quad_sieve();
  // n_{m-1,1} >= p_m, so jumps with values <= limit all occur at p_m <= limit.
  const auto seq = minimum_function(quad, index_at_most(limit), opts);
  rep.bound_exceeded = !seq.empty() && seq.back().bound_exceeded;
  for (const JumpPoint& j : jump_points(seq))
    if (j.previous_min >= 5 && j.previous_min <= limit) rep.jump_values.push_back(j.previous_min);

  for (const auto& r : quadruplets(5, limit, opts)) rep.quadruplet_starts.push_back(r.start);

  std::set_difference(rep.jump_values.begin(), rep.jump_values.end(), rep.quadruplet_starts.begin(),
                      rep.quadruplet_starts.end(), std::back_inserter(rep.jumps_not_quadruplets));
  std::set_difference(rep.quadruplet_starts.begin(), rep.quadruplet_starts.end(), rep.jump_values.begin(),
                      rep.jump_values.end(), std::back_inserter(rep.quadruplets_not_jumps));

  for (std::size_t i = 1; i < rep.jump_values.size(); ++i) {
    const u64 diff = rep.jump_values[i] - rep.jump_values[i - 1];
    rep.differences.push_back(diff);
    if (i == 1) rep.first_difference_is_6 = diff == 6;
    else if (diff < 30) rep.spacing_violations.push_back(i);
  }
  return rep;
}

}  // namespace osieve
