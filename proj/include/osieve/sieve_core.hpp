#pragma once

// Offset sieve kernel: post-sieve sets N_m as explicit segments and as
// period-level summaries.
//
// N_m is the set of n >= 1 such that for every i <= m and every offset o,
// p_i does not divide n + o. Membership of 1 follows from the same rule:
// it survives the single sieve at every depth and is removed by the double
// and quad sieves at depth 1 (1 = -2 mod 3).

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "osieve/errors.hpp"
#include "osieve/offset_system.hpp"
#include "osieve/parallel.hpp"
#include "osieve/primes.hpp"

namespace osieve {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kDefaultSegmentCap = std::size_t{1} << 22;
inline constexpr u64 kDefaultEnumerationCap = 1'000'000'000;
/// Largest sievable value; keeps n + offset and p^2 arithmetic inside 64 bits.
inline constexpr u64 kMaxSieveValue = u64{1} << 62;

class SievePlan;

/// Bitmap over [lo, hi] marking members of N_depth.
class SurvivorSegment {
 public:
  [[nodiscard]] u64 lo() const noexcept { return lo_; }
  [[nodiscard]] u64 hi() const noexcept { return hi_; }
  [[nodiscard]] u64 length() const noexcept { return hi_ - lo_ + 1; }
  [[nodiscard]] std::size_t depth() const noexcept { return depth_; }
  [[nodiscard]] const OffsetSystem& system() const noexcept { return system_; }

  /// n must lie in [lo, hi].
  [[nodiscard]] bool test(u64 n) const {
    const u64 i = n - lo_;
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  [[nodiscard]] std::size_t count() const noexcept {
    std::size_t c = 0;
    for (u64 w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  [[nodiscard]] std::vector<u64> members() const {
    std::vector<u64> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      u64 bits = words_[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        out.push_back(lo_ + w * 64 + static_cast<u64>(b));
        bits &= bits - 1;
      }
    }
    return out;
  }

  /// Sub-segment over [lo, hi], which must lie inside this one.
  [[nodiscard]] SurvivorSegment restrict(u64 lo, u64 hi) const {
    if (lo < lo_ || hi > hi_ || lo > hi) throw std::out_of_range("restrict: interval not contained");
    SurvivorSegment s(lo, hi, depth_, system_);
    for (u64 n = lo; n <= hi; ++n)
      if (!test(n)) s.clear(n - lo);
    return s;
  }

  friend bool operator==(const SurvivorSegment& a, const SurvivorSegment& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.depth_ == b.depth_ && a.system_ == b.system_ &&
           a.words_ == b.words_;
  }

 private:
  friend class SievePlan;

  SurvivorSegment(u64 lo, u64 hi, std::size_t depth, OffsetSystem system)
      : lo_(lo), hi_(hi), depth_(depth), system_(std::move(system)),
        words_(static_cast<std::size_t>((hi - lo) / 64 + 1), ~u64{0}) {
    const u64 tail = (hi - lo + 1) % 64;
    if (tail) words_.back() = (u64{1} << tail) - 1;
  }

  void clear(u64 i) noexcept { words_[i >> 6] &= ~(u64{1} << (i & 63)); }

  u64 lo_;
  u64 hi_;
  std::size_t depth_;
  OffsetSystem system_;
  std::vector<u64> words_;
};

/// Primes p_0..p_depth with their removed residue classes, ready to stride.
/// Immutable apart from extend_to(); safe to share across readers.
class SievePlan {
 public:
  SievePlan(OffsetSystem system, std::size_t depth) : system_(std::move(system)) {
    starts_.push_back(0);
    extend_to(depth);
  }

  [[nodiscard]] const OffsetSystem& system() const noexcept { return system_; }
  [[nodiscard]] std::size_t depth() const noexcept { return primes_.size() - 1; }
  [[nodiscard]] u64 prime(std::size_t i) const { return primes_[i]; }
  [[nodiscard]] std::span<const u64> primes() const noexcept { return primes_; }

  [[nodiscard]] std::span<const u64> residues(std::size_t i) const {
    return std::span<const u64>(residues_).subspan(starts_[i], starts_[i + 1] - starts_[i]);
  }

  void extend_to(std::size_t depth) {
    if (!primes_.empty() && depth <= this->depth()) return;
    const std::size_t from = primes_.size();
    auto table = PrimeCache::shared().covering_index(depth);
    for (std::size_t i = from; i <= depth; ++i) {
      const u64 p = (*table)[i];
      primes_.push_back(p);
      for (u64 r : system_.removed_residues(p)) residues_.push_back(r);
      starts_.push_back(residues_.size());
    }
  }

  /// True when sieving by p_i removes n.
  [[nodiscard]] bool removed_by(u64 n, std::size_t i) const {
    const u64 r = n % primes_[i];
    for (u64 x : residues(i))
      if (x == r) return true;
    return false;
  }

  [[nodiscard]] bool survives(u64 n) const {
    for (std::size_t i = 0; i < primes_.size(); ++i)
      if (removed_by(n, i)) return false;
    return true;
  }

  /// Bitmap of N_depth over [lo, hi]. Each removed residue class of each
  /// prime is crossed off by striding.
  [[nodiscard]] SurvivorSegment sieve(u64 lo, u64 hi, std::size_t cap = kDefaultSegmentCap) const {
    check_interval(lo, hi);
    if (hi - lo >= cap)
      throw resource_error("segment [" + std::to_string(lo) + ", " + std::to_string(hi) +
                           "] exceeds segment cap " + std::to_string(cap));
    SurvivorSegment seg(lo, hi, depth(), system_);
    const u64 len = hi - lo + 1;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      const u64 p = primes_[i];
      const u64 lo_mod = lo % p;
      for (u64 r : residues(i)) {
        u64 j = (r + p - lo_mod) % p;
        for (; j < len; j += p) seg.clear(j);
      }
    }
    return seg;
  }

  /// Smallest member of N_depth in [lo, hi], scanning segment by segment
  /// with windows that grow up to max_segment.
  [[nodiscard]] std::optional<u64> first_survivor(u64 lo, u64 hi,
                                                  std::size_t max_segment = kDefaultSegmentCap) const {
    if (lo > hi) return std::nullopt;
    u64 window = 1024;
    for (u64 a = lo;;) {
      const u64 b = (hi - a < window - 1) ? hi : a + window - 1;
      const SurvivorSegment seg = sieve(a, b, max_segment);
      for (std::size_t w = 0; w < seg.words_.size(); ++w)
        if (seg.words_[w]) return a + w * 64 + static_cast<u64>(std::countr_zero(seg.words_[w]));
      if (b == hi) return std::nullopt;
      a = b + 1;
      window = std::min<u64>(window * 2, max_segment);
    }
  }

  /// Every member of N_depth in [lo, hi], in ascending order. Large ranges
  /// are split into segments and may be sieved concurrently.
  [[nodiscard]] std::vector<u64> members(u64 lo, u64 hi, const ScanOptions& opts = {}) const {
    check_interval(lo, hi);
    auto parts = map_chunks(lo, hi, opts.segment_size, opts.threads, [&](u64 a, u64 b) {
      return sieve(a, b, opts.segment_size).members();
    });
    std::vector<u64> out;
    for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    return out;
  }

  /// Number of members of N_depth in [lo, hi].
  [[nodiscard]] u64 count(u64 lo, u64 hi, const ScanOptions& opts = {}) const {
    check_interval(lo, hi);
    auto parts = map_chunks(lo, hi, opts.segment_size, opts.threads, [&](u64 a, u64 b) {
      return static_cast<u64>(sieve(a, b, opts.segment_size).count());
    });
    u64 total = 0;
    for (u64 c : parts) total += c;
    return total;
  }

 private:
  void check_interval(u64 lo, u64 hi) const {
    if (lo == 0) throw std::domain_error("sieve interval must start at 1 or above");
    if (lo > hi) throw std::domain_error("sieve interval is empty (lo > hi)");
    if (hi > kMaxSieveValue) throw std::domain_error("sieve interval beyond 2^62");
  }

  OffsetSystem system_;
  std::vector<u64> primes_;
  std::vector<u64> residues_;
  std::vector<std::size_t> starts_;
};

/// True iff n is in N_depth: no p_i (i <= depth) divides n + o for any offset o.
/// Throws std::domain_error for n = 0.
inline bool survives(u64 n, std::size_t depth, const OffsetSystem& system) {
  if (n == 0) throw std::domain_error("survives: n must be >= 1");
  auto table = PrimeCache::shared().covering_index(depth);
  for (std::size_t i = 0; i <= depth; ++i) {
    const u64 p = (*table)[i];
    const u64 r = n % p;
    for (u64 o : system.offsets())
      if ((r + o % p) % p == 0) return false;
  }
  return true;
}

/// N_depth on [lo, hi] as a bitmap. hi - lo + 1 may not exceed cap.
inline SurvivorSegment sieve_segment(u64 lo, u64 hi, std::size_t depth, const OffsetSystem& system,
                                     std::size_t cap = kDefaultSegmentCap) {
  return SievePlan(system, depth).sieve(lo, hi, cap);
}

/// Period and exact survivor count of N_depth.
struct PeriodSummary {
  std::size_t depth = 0;
  BigInt period;          ///< p_0 p_1 ... p_depth
  BigInt survivor_count;  ///< (p_0 - r_0)(p_1 - r_1)...(p_depth - r_depth)
  std::vector<std::size_t> removed_counts;  ///< r_i per sieving prime
};

inline PeriodSummary period_summary(std::size_t depth, const OffsetSystem& system) {
  PeriodSummary s;
  s.depth = depth;
  s.period = 1;
  s.survivor_count = 1;
  for (u64 p : first_primes(depth + 1)) {
    const std::size_t r = system.removed_residues(p).size();
    s.period *= p;
    s.survivor_count *= (p - r);
    s.removed_counts.push_back(r);
  }
  return s;
}

/// Members of N_depth in [1, period]. Throws resource_error when the
/// period exceeds cap; period_summary() still works in that case.
inline std::vector<u64> period_elements(std::size_t depth, const OffsetSystem& system,
                                        u64 cap = kDefaultEnumerationCap,
                                        const ScanOptions& opts = {}) {
  const BigInt period = period_summary(depth, system).period;
  if (period > cap)
    throw resource_error("period " + period.str() + " exceeds enumeration cap " + std::to_string(cap));
  return SievePlan(system, depth).members(1, static_cast<u64>(period), opts);
}

}  // namespace osieve
