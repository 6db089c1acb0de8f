#include <gtest/gtest.h>

#include <cmath>

#include "factorbreak/error.hpp"
#include "factorbreak/kernels.hpp"
#include "factorbreak/rng.hpp"
#include "oracles.hpp"

using namespace factorbreak;

TEST(Bartlett, Values) {
  EXPECT_EQ(bartlett(0.0), 1.0);
  EXPECT_EQ(bartlett(0.5), 0.5);
  EXPECT_EQ(bartlett(-1.2), 0.0);
  EXPECT_EQ(bartlett(1.0), 0.0);
}

TEST(Bartlett, SymmetryBoundsSupportLipschitz) {
  Rng rng(1);
  for (int k = 0; k < 10000; ++k) {
    const double u = 6.0 * rng.uniform() - 3.0;
    const double v = 6.0 * rng.uniform() - 3.0;
    ASSERT_EQ(bartlett(u), bartlett(-u));
    ASSERT_GE(bartlett(u), 0.0);
    ASSERT_LE(bartlett(u), 1.0);
    if (std::abs(u) >= 1.0) ASSERT_EQ(bartlett(u), 0.0);
    ASSERT_LE(std::abs(bartlett(u) - bartlett(v)), std::abs(u - v) + 1e-15);
  }
}

TEST(Nu0, BartlettAnalytic) { EXPECT_NEAR(nu0(KernelKind::kBartlett), 2.0 / 3.0, 1e-12); }

TEST(Nu0, BartlettMatchesQuadrature) {
  const double q = oracle::simpson([](double u) { return bartlett(u) * bartlett(u); }, -1.0, 1.0, 2000);
  EXPECT_NEAR(nu0(KernelKind::kBartlett), q, 1e-9);
}

TEST(Nu0, UnsupportedKindThrows) {
  EXPECT_THROW(nu0(static_cast<KernelKind>(99)), ConfigError);
}

TEST(Bandwidth, RuleOfThumb) {
  EXPECT_NEAR(rule_of_thumb_h(100, 100), 0.15848931924611134, 1e-12);
  // 30480^(-1/5) evaluated independently.
  EXPECT_NEAR(rule_of_thumb_h(240, 127), 0.12682270367271145, 1e-12);
}

TEST(Bandwidth, DegenerateSampleRejectedAtConstruction) {
  EXPECT_DOUBLE_EQ(rule_of_thumb_h(1, 1), 1.0);
  EXPECT_THROW(KernelSpec::make(rule_of_thumb_h(1, 1), 1), ConfigError);
}

TEST(Bandwidth, HacLagCeiling) {
  EXPECT_EQ(hac_lag(200), 5);
  EXPECT_EQ(hac_lag(240), 5);
  EXPECT_EQ(hac_lag(8), 2);
  EXPECT_EQ(hac_lag(64), 3);  // 0.75 * 4 is already an integer
  EXPECT_EQ(hac_lag(100), 4);
}

TEST(KernelSpec, Validation) {
  const KernelSpec k = KernelSpec::make(0.2, 3);
  EXPECT_EQ(k.h(), 0.2);
  EXPECT_EQ(k.hac_lag(), 3);
  EXPECT_NEAR(k.nu0(), 2.0 / 3.0, 1e-12);
  EXPECT_THROW(KernelSpec::make(1.0, 3), ConfigError);
  EXPECT_THROW(KernelSpec::make(1.5, 3), ConfigError);
  EXPECT_THROW(KernelSpec::make(0.0, 3), ConfigError);
  EXPECT_THROW(KernelSpec::make(0.5, 0), ConfigError);
  EXPECT_NO_THROW(KernelSpec::make_unchecked(1.0, 1));
}
