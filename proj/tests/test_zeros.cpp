#include <gtest/gtest.h>

#include <cmath>

#include "charlab/zeros.hpp"

using namespace charlab;

TEST(ZeroCount, RiemannZerosThroughPrincipalCharacter) {
  // L(s, chi_0) = zeta(s)(1 - q^{-s}); zeta has zeros at 1/2 +- 14.1347i
  const auto ctx = build_context(7);
  const auto rep = zero_count_rect(Character(ctx, 0), 0.3, 15.0);
  EXPECT_EQ(rep.count, 2);
  const auto low = zero_count_rect(Character(ctx, 0), 0.3, 14.0);
  EXPECT_EQ(low.count, 0);
}

TEST(ZeroCount, NoZerosRightOfOne) {
  const auto ctx = build_context(31);
  ZeroCounter zc(ctx);
  for (std::uint64_t e = 1; e < 30; e += 3) EXPECT_EQ(zc.count(Character(ctx, e), 1.05, 8.0).count, 0) << e;
  EXPECT_GT(zc.cached_points(), 0u);
  zc.clear_cache();
  EXPECT_EQ(zc.cached_points(), 0u);
}

TEST(ZeroCount, BandsAddUp) {
  const auto ctx = build_context(23);
  ZeroCounter zc(ctx);
  const Character chi(ctx, 3);
  const auto full = zc.count_band(chi, 0.2, -6.0, 6.0).count;
  const auto a = zc.count_band(chi, 0.2, -6.0, 0.7).count;
  const auto b = zc.count_band(chi, 0.2, 0.7, 6.0).count;
  EXPECT_EQ(full, a + b);
}

TEST(ZeroCount, AgreesWithCriticalLineSignChanges) {
  for (std::uint64_t q : {5ull, 11ull, 19ull}) {
    const auto ctx = build_context(q);
    std::vector<Character> chars;
    for (std::uint64_t e = 1; e < q - 1; ++e) chars.push_back(Character(ctx, e));
    const auto z = critical_line_sign_changes(ctx, chars, 6.0);
    ZeroCounter zc(ctx);
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const auto rep = zc.count(chars[i], 0.25, 6.0);
      EXPECT_EQ(rep.count, z[i]) << "q=" << q << " e=" << chars[i].e;
      EXPECT_GT(rep.contour_margin, 0.0);
    }
  }
}

TEST(HardyZ, RealRotationMatchesModulus) {
  const auto ctx = build_context(13);
  for (std::uint64_t e : {1ull, 4ull, 6ull}) {
    const Character chi(ctx, e);
    for (double t : {0.3, 2.0, 7.5}) {
      const double Z = hardy_z(chi, t);
      EXPECT_NEAR(std::abs(Z), std::abs(l_oracle(chi, cplx(0.5, t)).value), 1e-9);
    }
  }
}

TEST(HardyZ, PrincipalCharacterUsesZeta) {
  // Z changes sign at the first zeta zero 14.1347...
  const auto ctx = build_context(5);
  const Character chi0(ctx, 0);
  EXPECT_LT(hardy_z(chi0, 14.10) * hardy_z(chi0, 14.17), 0.0);
}

TEST(ZeroCount, RejectsBadRectangles) {
  const auto ctx = build_context(7);
  ZeroCounter zc(ctx);
  EXPECT_THROW(zc.count_band(Character(ctx, 1), 0.5, 2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(zc.count_band(Character(ctx, 1), 1.6, 0.0, 1.0), std::invalid_argument);
  const auto other = build_context(11);
  EXPECT_THROW(zc.count(Character(other, 1), 0.5, 1.0), std::invalid_argument);
}
