#include <gtest/gtest.h>

#include <cmath>

#include "factorbreak/error.hpp"
#include "factorbreak/kernels.hpp"
#include "factorbreak/montecarlo.hpp"

using namespace factorbreak;

TEST(Dgp, ParseFamily) {
  EXPECT_EQ(parse_dgp_family("S1"), DgpFamily::S1);
  EXPECT_EQ(parse_dgp_family("dgp.l4"), DgpFamily::L4);
  EXPECT_EQ(parse_dgp_family("G3"), DgpFamily::G3);
  EXPECT_THROW(parse_dgp_family("S4"), ConfigError);
  EXPECT_STREQ(to_string(DgpFamily::L6), "L6");
}

TEST(Dgp, FamilyParameters) {
  const auto s1 = make_dgp(DgpFamily::S1, 50, 40);
  EXPECT_EQ(s1.error_ar, 0.0);
  EXPECT_EQ(s1.toeplitz_rho, 0.3);
  const auto l5 = make_dgp(DgpFamily::L5, 50, 40);
  EXPECT_EQ(l5.error_ar, 0.2);
  EXPECT_EQ(l5.toeplitz_rho, 0.0);
  EXPECT_EQ(l5.path, LoadingPath::kMidSampleShift);
  EXPECT_TRUE(l5.shift_local);
  const auto g3 = make_dgp(DgpFamily::G3, 50, 40);
  EXPECT_EQ(g3.error_ar, 0.2);
  EXPECT_EQ(g3.toeplitz_rho, 0.3);
  EXPECT_FALSE(g3.shift_local);
  EXPECT_EQ(make_dgp(DgpFamily::L2, 50, 40).path, LoadingPath::kLogistic);
}

TEST(Dgp, LocalDepartureRate) {
  EXPECT_NEAR(local_departure_rate(100, 100, rule_of_thumb_h(100, 100)), 0.015848931924611134,
              1e-15);
  EXPECT_NEAR(local_departure_rate(200, 100, 1.0), 1.0 / std::sqrt(20000.0), 1e-15);
}

TEST(Dgp, LogisticFunction) {
  const std::vector<double> beta{1, 3, 7, 9};
  EXPECT_DOUBLE_EQ(logistic_g(1.0, 0.1, beta), 0.5);
  EXPECT_NEAR(logistic_g(0.0, 0.1, beta), 1.0 / (1.0 + std::exp(-18.9)), 1e-15);
  EXPECT_NEAR(logistic_g(2.0, 0.1, beta), 1.0 / (1.0 + std::exp(3.5)), 1e-15);
  EXPECT_NEAR(logistic_g(5.0, 0.1, beta), 1.0 / (1.0 + std::exp(-6.4)), 1e-15);
}

TEST(Dgp, LoadingDepartures) {
  const auto s = make_dgp(DgpFamily::S2, 100, 100);
  EXPECT_EQ(loading_departure(s, 70), Eigen::Vector2d::Zero());

  const auto g = make_dgp(DgpFamily::G1, 100, 100);
  EXPECT_EQ(loading_departure(g, 50), Eigen::Vector2d::Zero());
  EXPECT_EQ(loading_departure(g, 51), Eigen::Vector2d(0.25, 0.25));

  const auto l4 = make_dgp(DgpFamily::L4, 100, 100);
  const double a = local_departure_rate(100, 100, rule_of_thumb_h(100, 100));
  EXPECT_NEAR(loading_departure(l4, 100)(0), 2.0 * a, 1e-15);
  EXPECT_EQ(loading_departure(l4, 10), Eigen::Vector2d::Zero());

  const auto l1 = make_dgp(DgpFamily::L1, 100, 100);
  const Eigen::Vector2d d = loading_departure(l1, 10);  // y = 1, G = 1/2
  EXPECT_NEAR(d(0), 10.0 * a * 0.5, 1e-15);
  EXPECT_EQ(d(1), 0.0);
}

TEST(Dgp, LocalDepartureVanishes) {
  auto max_departure = [](DgpFamily fam, int n) {
    const auto spec = make_dgp(fam, n, n);
    double m = 0.0;
    for (int t = 1; t <= n; ++t) m = std::max(m, loading_departure(spec, t).norm());
    return m;
  };
  for (DgpFamily fam : {DgpFamily::L1, DgpFamily::L2, DgpFamily::L3, DgpFamily::L4,
                        DgpFamily::L5, DgpFamily::L6}) {
    EXPECT_LT(max_departure(fam, 400), max_departure(fam, 50)) << to_string(fam);
    EXPECT_GT(max_departure(fam, 400), 0.0);
  }
}

TEST(Dgp, FactorMeanMatchesStationaryMean) {
  // Unit loadings and one series: x_t = f_1t + f_2t + e_t.
  auto spec = make_dgp(DgpFamily::S1, 10000, 1);
  spec.loading_sd = 0.0;
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) total += generate_panel(spec, seed).values().mean();
  EXPECT_NEAR(total / 10.0, 2.0 * 0.5 / 0.7, 0.03);
}

TEST(Dgp, ToeplitzErrorCovariance) {
  auto spec = make_dgp(DgpFamily::S1, 10000, 5);
  spec.loading_mean = 0.0;
  spec.loading_sd = 0.0;
  const Eigen::MatrixXd e = generate_panel(spec, 17).values();
  const Eigen::MatrixXd cov = e.transpose() * e / 10000.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      EXPECT_NEAR(cov(i, j), std::pow(0.3, std::abs(i - j)), 0.05) << i << ',' << j;
}

TEST(Dgp, ArErrors) {
  auto spec = make_dgp(DgpFamily::S2, 20000, 2);
  spec.loading_mean = 0.0;
  spec.loading_sd = 0.0;
  const Eigen::MatrixXd e = generate_panel(spec, 3).values();
  const double var = e.col(0).squaredNorm() / 20000.0;
  const double lag1 = e.col(0).head(19999).dot(e.col(0).tail(19999)) / 19999.0;
  EXPECT_NEAR(var, 1.0 / (1.0 - 0.04), 0.04);
  EXPECT_NEAR(lag1 / var, 0.2, 0.03);
  EXPECT_NEAR(e.col(0).dot(e.col(1)) / 20000.0, 0.0, 0.04);
}

TEST(Dgp, AbruptBreakShiftsLevel) {
  auto g = make_dgp(DgpFamily::G3, 4000, 20);
  g.loading_sd = 0.0;
  auto s = make_dgp(DgpFamily::S3, 4000, 20);
  s.loading_sd = 0.0;
  const Eigen::MatrixXd xg = generate_panel(g, 8).values();
  const Eigen::MatrixXd xs = generate_panel(s, 8).values();
  // Same seed, so the first half is identical and the second half moves by
  // 0.25 (f_1t + f_2t).
  EXPECT_EQ(xg.topRows(2000), xs.topRows(2000));
  const double diff = (xg.bottomRows(2000) - xs.bottomRows(2000)).mean();
  EXPECT_NEAR(diff, 0.25 * 2.0 * 0.5 / 0.7, 0.03);
}

TEST(Dgp, DeterministicAndValidated) {
  const auto spec = make_dgp(DgpFamily::L3, 30, 20);
  EXPECT_EQ(generate_panel(spec, 5).values(), generate_panel(spec, 5).values());
  EXPECT_NE(generate_panel(spec, 5).values(), generate_panel(spec, 6).values());
  auto bad = spec;
  bad.factor_ar = 1.0;
  EXPECT_THROW(generate_panel(bad, 1), ConfigError);
  bad = spec;
  bad.burn_in = -1;
  EXPECT_THROW(generate_panel(bad, 1), ConfigError);
}

TEST(Grid, Parse) {
  const auto g = parse_grid("2,3, auto");
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].r_tilde, 2);
  EXPECT_TRUE(g[2].is_auto());
  EXPECT_EQ(g[2].label(), "auto");
  const auto range = parse_grid("1..4");
  ASSERT_EQ(range.size(), 4u);
  EXPECT_EQ(range[3].r_tilde, 4);
  EXPECT_THROW(parse_grid("0"), ConfigError);
  EXPECT_THROW(parse_grid("two"), ConfigError);
  EXPECT_THROW(parse_grid(""), ConfigError);
}

namespace {

McConfig small_experiment(int reps, int threads) {
  McConfig cfg;
  cfg.dgp = make_dgp(DgpFamily::S1, 40, 30);
  cfg.replications = reps;
  cfg.test_cfg.B = 19;
  cfg.grid = parse_grid("2,3,auto");
  cfg.r_max = 4;
  cfg.base_seed = 77;
  cfg.threads = threads;
  return cfg;
}

}  // namespace

TEST(RunExperiment, SingleReplicationGivesZeroOrOne) {
  const RateTable t = run_experiment(small_experiment(1, 1));
  ASSERT_EQ(t.rows.size(), 3u);
  for (const RateRow& row : t.rows) {
    EXPECT_TRUE(row.rate == 0.0 || row.rate == 1.0);
    EXPECT_EQ(row.replications, 1);
    EXPECT_EQ(row.T, 40);
    EXPECT_EQ(row.N, 30);
  }
  EXPECT_EQ(t.rows[2].r_tilde, "auto");
}

TEST(RunExperiment, ThreadCountDoesNotMatter) {
  const RateTable a = run_experiment(small_experiment(12, 1));
  const RateTable b = run_experiment(small_experiment(12, 4));
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].rejections, b.rows[k].rejections);
    EXPECT_EQ(a.rows[k].rate, b.rows[k].rate);
    EXPECT_EQ(a.rows[k].failures, 0);
  }
}

TEST(RunExperiment, Validation) {
  McConfig cfg = small_experiment(0, 1);
  EXPECT_THROW(run_experiment(cfg), ConfigError);
  cfg = small_experiment(2, 1);
  cfg.grid.clear();
  EXPECT_THROW(run_experiment(cfg), ConfigError);
}
