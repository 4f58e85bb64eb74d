#include <gtest/gtest.h>

#include <numeric>

#include "charlab/modarith.hpp"

using namespace charlab;

TEST(Sieve, CountsMatchPrimePi) {
  EXPECT_TRUE(sieve_primes(1).primes.empty());
  EXPECT_EQ(sieve_primes(2).primes, std::vector<std::uint64_t>{2});
  EXPECT_EQ(sieve_primes(100).primes.size(), 25u);
  EXPECT_EQ(sieve_primes(1000000).primes.size(), 78498u);
}

TEST(Sieve, SegmentedRangeMatchesFullTable) {
  const auto all = sieve_primes(300000);
  std::vector<std::uint64_t> part;
  for_each_prime(100000, 300000, [&](std::uint64_t p) { part.push_back(p); });
  std::vector<std::uint64_t> expect;
  for (auto p : all.primes)
    if (p >= 100000) expect.push_back(p);
  EXPECT_EQ(part, expect);
}

TEST(Primality, AgreesWithSieve) {
  const auto t = sieve_primes(5000);
  std::vector<char> mark(5001, 0);
  for (auto p : t.primes) mark[p] = 1;
  for (std::uint64_t n = 0; n <= 5000; ++n) EXPECT_EQ(is_prime(n), mark[n] == 1) << n;
  EXPECT_TRUE(is_prime(1000000007));
  EXPECT_FALSE(is_prime(1000000007ull * 3));
}

TEST(PrimitiveRoot, SmallestRootsFromSympy) {
  // sympy.primitive_root
  const std::vector<std::pair<std::uint64_t, std::uint64_t>> ref = {
      {3, 2}, {5, 2}, {7, 3}, {13, 2}, {101, 2}, {499, 7}, {1009, 11}, {10007, 5}};
  for (auto [q, g] : ref) EXPECT_EQ(find_primitive_root(q), g) << q;
}

TEST(Context, DiscreteLogInvertsPower) {
  for (std::uint64_t q : {3ull, 13ull, 499ull, 10007ull}) {
    const auto ctx = build_context(q);
    EXPECT_EQ(ctx.order(), q - 1);
    for (std::uint64_t k = 0; k < q - 1; ++k) EXPECT_EQ(ctx.ind(ctx.power(k)), k);
    std::uint64_t prod = 1;
    for (auto [p, e] : ctx.factor_qm1())
      for (int i = 0; i < e; ++i) prod *= p;
    EXPECT_EQ(prod, q - 1);
  }
}

TEST(Context, RootsAreUnitModulus) {
  const auto ctx = build_context(101);
  for (std::uint64_t k = 0; k < 100; ++k) EXPECT_NEAR(std::abs(ctx.root(k)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(ctx.root(50) + 1.0), 0.0, 1e-15);
}

TEST(Context, DivisorsOfOrder) {
  const auto ctx = build_context(13);
  EXPECT_EQ(ctx.divisors_of_order(), (std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12}));
}

TEST(Context, RejectsCompositeAndTiny) {
  EXPECT_THROW(build_context(91), CompositeModulusError);
  EXPECT_THROW(build_context(2), std::invalid_argument);
  try {
    build_context(100);
  } catch (const CompositeModulusError& e) {
    EXPECT_EQ(e.modulus(), 100u);
  }
}

TEST(Mobius, FirstThirtyFromSympy) {
  const std::vector<int> ref = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1,
                                0, -1, 0, -1, 0, 1, 1, -1, 0, 0, 1, 0, 0, -1, -1};
  const auto tab = mobius_table(30);
  for (int n = 1; n <= 30; ++n) {
    EXPECT_EQ(mobius(n), ref[n - 1]) << n;
    EXPECT_EQ(tab[n], ref[n - 1]) << n;
  }
}

TEST(Mobius, DivisorSumVanishes) {
  const auto mu = mobius_table(2000);
  for (std::uint64_t n = 2; n <= 2000; ++n) {
    int s = 0;
    for (std::uint64_t d = 1; d <= n; ++d)
      if (n % d == 0) s += mu[d];
    EXPECT_EQ(s, 0) << n;
  }
}

TEST(VonMangoldt, PrimePowersOnly) {
  EXPECT_FALSE(von_mangoldt(1).has_value());
  EXPECT_FALSE(von_mangoldt(12).has_value());
  const auto pp = von_mangoldt(243);
  ASSERT_TRUE(pp.has_value());
  EXPECT_EQ(pp->p, 3u);
  EXPECT_EQ(pp->k, 5);
  EXPECT_DOUBLE_EQ(von_mangoldt_value(128), std::log(2.0));
  // sum_{d | n} Lambda(d) = log n
  for (std::uint64_t n = 2; n < 500; ++n) {
    double s = 0;
    for (std::uint64_t d = 1; d <= n; ++d)
      if (n % d == 0) s += von_mangoldt_value(d);
    EXPECT_NEAR(s, std::log(static_cast<double>(n)), 1e-12) << n;
  }
}

TEST(Arith, PowmodAndGcd) {
  EXPECT_EQ(powmod(2, 100, 101), 1u);
  EXPECT_EQ(powmod(7, 0, 13), 1u);
  EXPECT_EQ(powmod(123456789, 987654321, 1000000007), 652541198u);
  EXPECT_EQ(gcd_u64(84, 36), 12u);
  EXPECT_EQ(gcd_u64(0, 5), 5u);
}
