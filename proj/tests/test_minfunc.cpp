#include <gtest/gtest.h>

#include <vector>

#include "oracle.hpp"
#include "osieve/minfunc.hpp"

using namespace osieve;

namespace {

std::vector<u64> minima(const std::vector<MinSeqEntry>& seq) {
  std::vector<u64> v;
  for (const auto& e : seq) v.push_back(e.n_m1);
  return v;
}

std::vector<u64> jump_primes(const std::vector<JumpPoint>& jumps) {
  std::vector<u64> v;
  for (const auto& j : jumps) v.push_back(j.p_m);
  return v;
}

}  // namespace

TEST(MinimumFunction, DoubleSieveTable) {
  const auto seq = minimum_function(OffsetSystem::double_sieve(), 16);
  ASSERT_EQ(seq.size(), 17u);
  EXPECT_EQ(minima(seq), (std::vector<u64>{3, 5, 11, 11, 17, 17, 29, 29, 29, 41, 41, 41, 59, 59, 59, 59, 71}));
  EXPECT_EQ(seq.back().p_m, 59u);
  EXPECT_FALSE(seq[0].is_jump);
}

TEST(MinimumFunction, QuadSieve) {
  const auto seq = minimum_function(OffsetSystem::quad_sieve(), 45);
  EXPECT_EQ(seq[0].n_m1, 3u);
  EXPECT_EQ(seq[1].n_m1, 5u);
  EXPECT_EQ(seq[2].n_m1, 11u);
  EXPECT_EQ(seq[3].n_m1, 11u);
  for (std::size_t m = 4; m <= 24; ++m) EXPECT_EQ(seq[m].n_m1, 101u) << m;
  EXPECT_EQ(nth_prime(25), 101u);
  for (std::size_t m = 25; m <= 41; ++m) EXPECT_EQ(seq[m].n_m1, 191u) << m;
  EXPECT_EQ(seq[42].n_m1, 821u);
}

TEST(MinimumFunction, SingleSieveIsNextPrime) {
  const auto seq = minimum_function(OffsetSystem::single_sieve(), 300);
  for (const auto& e : seq) ASSERT_EQ(e.n_m1, nth_prime(e.m + 1));
}

TEST(MinimumFunction, AgreesWithLinearScanOracle) {
  const auto primes = oracle::first_primes(40);
  for (const OffsetSystem& sys : {OffsetSystem::single_sieve(), OffsetSystem::double_sieve(),
                                  OffsetSystem::quad_sieve(), OffsetSystem::custom({0, 2, 6})}) {
    const std::vector<u64> offs(sys.offsets().begin(), sys.offsets().end());
    const auto seq = minimum_function(sys, 30);
    for (const auto& e : seq) ASSERT_EQ(e.n_m1, oracle::minimum(e.m, offs, primes)) << sys.name() << " m=" << e.m;
  }
}

TEST(MinimumFunction, BoundExceededIsFlaggedNotExtended) {
  // A ten-offset admissible pattern whose depth-4 minimum (221) lies past 13^2 + 34.
  const auto sys = OffsetSystem::custom({0, 2, 6, 8, 12, 18, 20, 26, 30, 32});
  const auto seq = minimum_function(sys, 10);
  ASSERT_EQ(seq.size(), 5u);
  EXPECT_EQ(seq[3].n_m1, 11u);
  EXPECT_TRUE(seq[4].bound_exceeded);
  EXPECT_EQ(seq[4].n_m1, 0u);
  EXPECT_EQ(minimum_search_bound(4, sys), 203u);
}

TEST(MinimumFunction, Invariants) {
  for (const OffsetSystem& sys :
       {OffsetSystem::single_sieve(), OffsetSystem::double_sieve(), OffsetSystem::quad_sieve()}) {
    const auto seq = minimum_function(sys, 200);
    const auto primes = oracle::first_primes(202);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const auto& e = seq[i];
      ASSERT_FALSE(e.bound_exceeded);
      ASSERT_GT(e.n_m1, 1u);
      ASSERT_GE(e.n_m1, primes[e.m + 1]);
      for (u64 o : sys.offsets())
        for (std::size_t k = 0; k <= e.m; ++k) ASSERT_EQ(oracle::gcd(e.n_m1 + o, primes[k]), 1u);
      if (i > 0) {
        ASSERT_GE(e.n_m1, seq[i - 1].n_m1);
        ASSERT_EQ(e.is_jump, e.n_m1 > seq[i - 1].n_m1);
      }
    }
  }
}

TEST(JumpPoints, Examples) {
  EXPECT_EQ(jump_primes(jump_points(OffsetSystem::quad_sieve(), 42)), (std::vector<u64>{3, 5, 11, 101, 191}));
  EXPECT_EQ(jump_primes(jump_points(OffsetSystem::double_sieve(), 16)),
            (std::vector<u64>{3, 5, 11, 17, 29, 41, 59}));
  EXPECT_TRUE(jump_points(OffsetSystem::quad_sieve(), 0).empty());
  EXPECT_TRUE(jump_points(OffsetSystem::double_sieve(), 0).empty());
}

TEST(JumpPoints, DoubleSieveJumpRemovesItsOwnPrimeAndTwinFollows) {
  const std::size_t m_max = index_at_most(10000);
  for (const auto& j : jump_points(OffsetSystem::double_sieve(), m_max)) {
    ASSERT_EQ(j.previous_min, j.p_m) << "m=" << j.m;
    ASSERT_TRUE(oracle::is_prime(j.p_m + 2)) << j.p_m;
  }
}

TEST(JumpPoints, KeepOccurring) {
  // n_{m,1} >= p_{m+1}, so whenever p_{m+1} exceeds n_{m-1,1} step m must jump.
  const auto seq = minimum_function(OffsetSystem::quad_sieve(), 2000);
  const auto jumps = jump_points(seq);
  ASSERT_FALSE(jumps.empty());
  std::size_t forced = 0;
  for (std::size_t m = 1; m < seq.size(); ++m) {
    if (nth_prime(m + 1) > seq[m - 1].n_m1) {
      ++forced;
      ASSERT_TRUE(seq[m].is_jump) << "m=" << m;
    }
  }
  EXPECT_GT(forced, 5u);
  EXPECT_GT(jumps.back().p_m, 10000u);
}

TEST(EffectiveRangeTest, Examples) {
  EXPECT_EQ(effective_range(1, OffsetSystem::double_sieve()).members, (std::vector<u64>{5, 11, 17}));
  EXPECT_EQ(effective_range(3, OffsetSystem::double_sieve()).members,
            (std::vector<u64>{11, 17, 29, 41, 59, 71, 101, 107}));
  EXPECT_EQ(effective_range(1, OffsetSystem::single_sieve()).members,
            (std::vector<u64>{5, 7, 11, 13, 17, 19, 23}));
  EXPECT_EQ(effective_range(0, OffsetSystem::single_sieve()).members, (std::vector<u64>{3, 5, 7}));
  EXPECT_EQ(effective_range(0, OffsetSystem::double_sieve()).members, (std::vector<u64>{3, 5}));
  EXPECT_EQ(effective_range(2, OffsetSystem::double_sieve()).members, (std::vector<u64>{11, 17, 29, 41}));

  const auto quad = effective_range(3, OffsetSystem::quad_sieve());
  EXPECT_EQ(quad.cutoff, 111);
  EXPECT_EQ(quad.members, (std::vector<u64>{11, 101}));
  EXPECT_EQ(quad.members, oracle::quadruplets(8, 111));
}

TEST(EffectiveRangeTest, EmptyWhenCutoffBelowPrime) {
  const auto r = effective_range(0, OffsetSystem::quad_sieve());
  EXPECT_EQ(r.cutoff, -1);
  EXPECT_TRUE(r.members.empty());
}

TEST(EffectiveRangeTest, MembersAreFullConstellations) {
  for (const OffsetSystem& sys :
       {OffsetSystem::single_sieve(), OffsetSystem::double_sieve(), OffsetSystem::quad_sieve()}) {
    for (std::size_t m = 1; m <= 60; ++m) {
      const auto r = effective_range(m, sys, 2'000'000);
      EXPECT_TRUE(r.violations.empty()) << sys.name() << " m=" << m;
      for (u64 z : r.members)
        for (u64 o : sys.offsets()) ASSERT_TRUE(oracle::is_prime(z + o)) << z;
    }
  }
}

TEST(EffectiveRangeTest, ClipLimitsMembers) {
  const auto r = effective_range(3, OffsetSystem::double_sieve(), 60);
  EXPECT_EQ(r.members, (std::vector<u64>{11, 17, 29, 41, 59}));
}

TEST(Assumption41, FirstRowsAndSixteen) {
  const auto rep = check_assumption_41(16);
  ASSERT_EQ(rep.rows.size(), 17u);
  EXPECT_TRUE(rep.holds());
  EXPECT_EQ(rep.rows[0].cutoff, 5u);
  EXPECT_EQ(rep.rows[0].n_m1, 3u);
  EXPECT_TRUE(rep.rows[0].minimum_within);
  EXPECT_EQ(rep.rows[16].p_next, 61u);
  EXPECT_EQ(rep.rows[16].cutoff, 61u * 61u - 4u);
  EXPECT_EQ(rep.rows[16].n_m1, 71u);
  EXPECT_TRUE(rep.rows[16].range_nonempty);
  EXPECT_EQ(rep.rows[16].first_in_range, std::optional<u64>(71));
  EXPECT_EQ(rep.min_margin, 2);  // m=0: 5 - 3
}

TEST(Assumption41, SolitaryRunsCountPrimesBetweenMinima) {
  const auto rep = check_assumption_41(16);
  // Jump at m=6 (p=17): minima 17 -> 29. 19 and 23 lie strictly between and
  // both are solitary (21 and 25 are composite).
  bool found = false;
  for (const auto& run : rep.solitary_runs) {
    if (run.m == 6) {
      found = true;
      EXPECT_EQ(run.from, 17u);
      EXPECT_EQ(run.to, 29u);
      EXPECT_EQ(run.primes, 2u);
      EXPECT_EQ(run.solitary, 2u);
    }
  }
  EXPECT_TRUE(found);
}
