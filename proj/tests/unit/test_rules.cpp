#include <gtest/gtest.h>

#include <cmath>

#include "yeast/errors.hpp"
#include "yeast/rules.hpp"

using yeast::MethodKind;
using yeast::MethodSpec;
using yeast::Sidedness;

TEST(MethodSpec, NamesRoundTrip) {
  for (const auto& m : yeast::benchmark_methods()) {
    EXPECT_EQ(MethodSpec::parse(m.name()), m) << m.name();
  }
  EXPECT_EQ(yeast::benchmark_methods().size(), 10U);
}

TEST(MethodSpec, ParseVariants) {
  EXPECT_EQ(MethodSpec::parse("yeast").kind, MethodKind::yeast);
  EXPECT_EQ(MethodSpec::parse("PYEAST14"), (MethodSpec{MethodKind::pyeast, 14.0}));
  EXPECT_EQ(MethodSpec::parse("mSPRT100"), (MethodSpec{MethodKind::msprt, 100.0}));
  EXPECT_EQ(MethodSpec::parse("GAVI750").name(), "GAVI750");
  EXPECT_EQ(MethodSpec::parse("mSPRTphi2.5").name(), "mSPRTphi2.5");
}

TEST(MethodSpec, UnknownNamesListValidOnes) {
  try {
    MethodSpec::parse("sprt");
    FAIL() << "expected UsageError";
  } catch (const yeast::UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("YEAST"), std::string::npos);
  }
  EXPECT_THROW(MethodSpec::parse("pYEAST2.5"), yeast::UsageError);
  EXPECT_THROW(MethodSpec::parse("GAVI"), yeast::UsageError);
  EXPECT_THROW(MethodSpec::parse("GAVI-3"), yeast::UsageError);
}

TEST(Schedule, YeastIsConstant) {
  const yeast::TestConfig cfg{0.05, Sidedness::one_sided, 500, 2.0};
  const auto s = yeast::schedule_for({MethodKind::yeast, 0}, cfg);
  ASSERT_EQ(s.horizon(), 500);
  const double b = yeast::constant_boundary(cfg).threshold;
  for (double t : s.thresholds) {
    EXPECT_EQ(t, b);
  }
  EXPECT_FALSE(s.crosses(1, b));
  EXPECT_TRUE(s.crosses(1, std::nextafter(b, 1e9)));
  EXPECT_THROW(s.threshold_at(501), yeast::UsageError);
}

TEST(Schedule, TwoSidedUsesAbsoluteValue) {
  const yeast::TestConfig cfg{0.05, Sidedness::two_sided, 10, 1.0};
  const auto s = yeast::schedule_for({MethodKind::yeast, 0}, cfg);
  EXPECT_TRUE(s.crosses(3, -100.0));
  EXPECT_FALSE(s.crosses(3, -1.0));
}

TEST(Schedule, StaircaseFollowsPeriods) {
  const yeast::TestConfig cfg{0.05, Sidedness::one_sided, 500, 2.0};
  const auto s = yeast::schedule_for({MethodKind::pyeast, 7}, cfg);
  const auto b = yeast::staircase_boundaries(yeast::StaircasePlan::equal_periods(500, 7, 2.0), 0.05);
  for (std::int64_t n = 1; n <= 500; ++n) {
    EXPECT_EQ(s.threshold_at(n), b.threshold_at(n));
  }
  EXPECT_THROW(yeast::schedule_for({MethodKind::pyeast, 7}, {0.05, Sidedness::two_sided, 500, 2.0}),
               yeast::UsageError);
}

TEST(Schedule, BonferroniUsesCheckCount) {
  const yeast::TestConfig cfg{0.05, Sidedness::one_sided, 500, 2.0};
  const auto all = yeast::schedule_for({MethodKind::bonferroni, 0}, cfg);
  const auto fourteen = yeast::schedule_for({MethodKind::bonferroni, 0}, cfg, 14);
  EXPECT_DOUBLE_EQ(all.threshold_at(100), yeast::bonferroni_threshold(0.05, 500, 100, 2.0));
  EXPECT_DOUBLE_EQ(fourteen.threshold_at(100), yeast::bonferroni_threshold(0.05, 14, 100, 2.0));
}

TEST(BoundaryVariant, Accessors) {
  yeast::Boundary c = yeast::ConstantBoundary{5.0, Sidedness::two_sided, 0.05, 10};
  EXPECT_EQ(yeast::horizon_of(c), 10);
  EXPECT_EQ(yeast::sidedness_of(c), Sidedness::two_sided);
  EXPECT_EQ(yeast::threshold_at(c, 10), 5.0);
  EXPECT_THROW(yeast::threshold_at(c, 11), yeast::UsageError);
  yeast::Boundary s = yeast::StaircaseBoundary{{1.0, 2.0}, {3, 5}, 0.05, 0, 0.04};
  EXPECT_EQ(yeast::horizon_of(s), 5);
  EXPECT_EQ(yeast::sidedness_of(s), Sidedness::one_sided);
  EXPECT_EQ(yeast::threshold_at(s, 4), 2.0);
}
