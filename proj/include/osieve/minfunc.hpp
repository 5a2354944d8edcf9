#pragma once

// Minimum function n_{m,1} (smallest member > 1 of N_m), jump points,
// effective ranges, and the empirical checker for the double-sieve range
// assumption N_m ∩ (p_m, p_{m+1}^2 - 4] != ∅.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "osieve/offset_system.hpp"
#include "osieve/primes.hpp"
#include "osieve/sieve_core.hpp"

namespace osieve {

struct MinSeqEntry {
  std::size_t m = 0;
  u64 p_m = 0;
  u64 n_m1 = 0;  ///< 0 when bound_exceeded
  bool is_jump = false;
  /// No survivor > 1 below p_{m+1}^2 + c. The sequence stops here.
  bool bound_exceeded = false;

  friend bool operator==(const MinSeqEntry&, const MinSeqEntry&) = default;
};

/// Search bound for n_{m,1}: p_{m+1}^2 + c.
inline u64 minimum_search_bound(std::size_t m, const OffsetSystem& system) {
  const u64 next = nth_prime(m + 1);
  if (next > (u64{1} << 31)) throw std::domain_error("p_{m+1}^2 exceeds the sievable range");
  return next * next + system.cutoff_constant();
}

/// n_{0,1}, ..., n_{m_max,1}, built incrementally: the previous minimum is
/// carried forward if p_m does not remove it, otherwise the next survivor is
/// found by a segmented forward scan. If the scan reaches p_{m+1}^2 + c
/// without a survivor the entry is flagged and the sequence ends there.
inline std::vector<MinSeqEntry> minimum_function(const OffsetSystem& system, std::size_t m_max,
                                                 const ScanOptions& opts = {}) {
  std::vector<MinSeqEntry> out;
  out.reserve(m_max + 1);
  SievePlan plan(system, 0);
  u64 current = 0;
  for (std::size_t m = 0; m <= m_max; ++m) {
    plan.extend_to(m);
    MinSeqEntry e{m, plan.prime(m), 0, false, false};
    std::optional<u64> found;
    if (m == 0) {
      found = plan.first_survivor(2, minimum_search_bound(m, system), opts.segment_size);
    } else if (!plan.removed_by(current, m)) {
      found = current;
    } else {
      e.is_jump = true;
      found = plan.first_survivor(current + 1, minimum_search_bound(m, system), opts.segment_size);
    }
    if (!found) {
      e.bound_exceeded = true;
      out.push_back(e);
      break;
    }
    e.n_m1 = current = *found;
    out.push_back(e);
  }
  return out;
}

/// Largest index m with p_m <= x (x >= 2).
inline std::size_t index_at_most(u64 x) {
  if (x < 2) throw std::domain_error("no prime <= " + std::to_string(x));
  return prime_pi(x) - 1;
}

struct JumpPoint {
  std::size_t m = 0;
  u64 p_m = 0;
  u64 previous_min = 0;  ///< n_{m-1,1}, the value removed by p_m
  u64 new_min = 0;       ///< n_{m,1}

  friend bool operator==(const JumpPoint&, const JumpPoint&) = default;
};

/// Every m <= m_max with n_{m-1,1} < n_{m,1}. m = 0 is never a jump.
inline std::vector<JumpPoint> jump_points(const std::vector<MinSeqEntry>& seq) {
  std::vector<JumpPoint> out;
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (seq[i].is_jump && !seq[i].bound_exceeded)
      out.push_back({seq[i].m, seq[i].p_m, seq[i - 1].n_m1, seq[i].n_m1});
  return out;
}

inline std::vector<JumpPoint> jump_points(const OffsetSystem& system, std::size_t m_max,
                                          const ScanOptions& opts = {}) {
  if (m_max == 0) return {};
  return jump_points(minimum_function(system, m_max, opts));
}

/// N_m ∩ (p_m, p_{m+1}^2 - c], c = max offset + 2.
struct EffectiveRange {
  std::size_t m = 0;
  u64 p_m = 0;
  std::int64_t cutoff = 0;  ///< p_{m+1}^2 - c; may be <= p_m, giving an empty range
  std::vector<u64> members;
  /// Members z for which some z + o is composite. Empty unless the
  /// constellation property fails.
  std::vector<u64> violations;
};

/// Members are listed up to min(cutoff, clip_hi), each checked for z + o
/// prime over every offset.
inline EffectiveRange effective_range(std::size_t m, const OffsetSystem& system,
                                      u64 clip_hi = std::numeric_limits<u64>::max(),
                                      const ScanOptions& opts = {}) {
  EffectiveRange r;
  r.m = m;
  r.p_m = nth_prime(m);
  const u64 next = nth_prime(m + 1);
  if (next > (u64{1} << 31)) throw std::domain_error("p_{m+1}^2 exceeds the sievable range");
  r.cutoff = static_cast<std::int64_t>(next * next) - static_cast<std::int64_t>(system.cutoff_constant());
  if (r.cutoff <= static_cast<std::int64_t>(r.p_m)) return r;
  const u64 hi = std::min(static_cast<u64>(r.cutoff), clip_hi);
  if (hi <= r.p_m) return r;
  r.members = SievePlan(system, m).members(r.p_m + 1, hi, opts);
  for (u64 z : r.members) {
    for (u64 o : system.offsets()) {
      if (!is_prime(z + o)) {
        r.violations.push_back(z);
        break;
      }
    }
  }
  return r;
}

struct Assumption41Row {
  std::size_t m = 0;
  u64 p_m = 0;
  u64 p_next = 0;
  u64 cutoff = 0;  ///< p_{m+1}^2 - 4
  u64 n_m1 = 0;
  std::optional<u64> first_in_range;  ///< smallest member of N_m in (p_m, cutoff]
  bool range_nonempty = false;
  bool minimum_within = false;  ///< n_{m,1} <= cutoff
  std::int64_t margin = 0;      ///< cutoff - n_{m,1}
};

/// Solitary primes (p prime, p + 2 composite) strictly between two
/// successive minima of the double sieve.
struct SolitaryRun {
  std::size_t m = 0;  ///< jump index
  u64 from = 0;       ///< n_{m-1,1}
  u64 to = 0;         ///< n_{m,1}
  std::size_t primes = 0;
  std::size_t solitary = 0;
};

struct Assumption41Report {
  std::vector<Assumption41Row> rows;
  std::vector<std::size_t> violations;  ///< m where either condition fails
  std::int64_t min_margin = std::numeric_limits<std::int64_t>::max();
  double max_ratio = 0.0;  ///< max over m of n_{m,1} / cutoff
  double mean_margin = 0.0;
  std::vector<SolitaryRun> solitary_runs;

  [[nodiscard]] bool holds() const noexcept { return violations.empty(); }
};

/// Runs the double sieve to depth m_max and records, for every m, whether
/// N_m meets (p_m, p_{m+1}^2 - 4] and whether n_{m,1} <= p_{m+1}^2 - 4.
/// The range check is an independent segmented scan, not read off the
/// minimum function.
inline Assumption41Report check_assumption_41(std::size_t m_max, const ScanOptions& opts = {}) {
  const OffsetSystem system = OffsetSystem::double_sieve();
  const auto seq = minimum_function(system, m_max, opts);
  Assumption41Report rep;
  SievePlan plan(system, 0);
  double margin_sum = 0.0;
  for (const MinSeqEntry& e : seq) {
    plan.extend_to(e.m);
    Assumption41Row row;
    row.m = e.m;
    row.p_m = e.p_m;
    row.p_next = nth_prime(e.m + 1);
    row.cutoff = row.p_next * row.p_next - 4;
    row.n_m1 = e.n_m1;
    if (row.cutoff > row.p_m) row.first_in_range = plan.first_survivor(row.p_m + 1, row.cutoff, opts.segment_size);
    row.range_nonempty = row.first_in_range.has_value();
    row.minimum_within = !e.bound_exceeded && e.n_m1 <= row.cutoff;
    row.margin = static_cast<std::int64_t>(row.cutoff) - static_cast<std::int64_t>(e.n_m1);
    if (!row.range_nonempty || !row.minimum_within) rep.violations.push_back(row.m);
    rep.min_margin = std::min(rep.min_margin, row.margin);
    rep.max_ratio = std::max(rep.max_ratio, static_cast<double>(e.n_m1) / static_cast<double>(row.cutoff));
    margin_sum += static_cast<double>(row.margin);
    rep.rows.push_back(row);
  }
  if (!rep.rows.empty()) rep.mean_margin = margin_sum / static_cast<double>(rep.rows.size());

  for (const JumpPoint& j : jump_points(seq)) {
    SolitaryRun run{j.m, j.previous_min, j.new_min, 0, 0};
    for (u64 n = j.previous_min + 1; n < j.new_min; ++n) {
      if (!is_prime(n)) continue;
      ++run.primes;
      if (!is_prime(n + 2)) ++run.solitary;
    }
    rep.solitary_runs.push_back(run);
  }
  return rep;
}

}  // namespace osieve
