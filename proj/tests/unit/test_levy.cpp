#include <gtest/gtest.h>

#include "yeast/errors.hpp"
#include "yeast/levy.hpp"

TEST(Levy, SmallExamples) {
  const auto a = yeast::levy_oracle_enumerate(2, 2.0);
  EXPECT_DOUBLE_EQ(a.lhs, 0.25);
  EXPECT_DOUBLE_EQ(a.rhs, 0.5);
  const auto b = yeast::levy_oracle_enumerate(2, 1.0);
  EXPECT_DOUBLE_EQ(b.lhs, 0.5);
  EXPECT_DOUBLE_EQ(b.rhs, 0.5);
  EXPECT_TRUE(b.holds);
  const auto c = yeast::levy_oracle_enumerate(1, 0.7);
  EXPECT_DOUBLE_EQ(c.lhs, 0.5);
  EXPECT_DOUBLE_EQ(c.rhs, 1.0);
}

TEST(Levy, HoldsForAllSmallWalks) {
  for (int n = 1; n <= 12; ++n) {
    for (int twice_b = 1; twice_b <= 2 * n; ++twice_b) {
      for (bool two_sided : {false, true}) {
        const auto r = yeast::levy_oracle_enumerate(n, 0.5 * twice_b, two_sided);
        EXPECT_TRUE(r.holds) << n << " " << 0.5 * twice_b;
        EXPECT_LE(r.lhs, r.rhs);
      }
    }
  }
}

TEST(Levy, Limits) {
  EXPECT_THROW(yeast::levy_oracle_enumerate(21, 1.0), yeast::ResourceError);
  EXPECT_THROW(yeast::levy_oracle_enumerate(0, 1.0), yeast::DomainError);
  EXPECT_EQ(yeast::levy_oracle_enumerate(20, 5.0).paths, 1U << 20);
}
