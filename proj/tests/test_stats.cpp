#include <gtest/gtest.h>

#include <random>

#include "clrsum/parallel.hpp"
#include "clrsum/stats.hpp"
#include "oracles.hpp"

using namespace clrsum;

TEST(Pearson, IdentityAndNegation) {
  Eigen::VectorXd x(5);
  x << 0.3, -1.0, 2.5, 4.0, 0.0;
  EXPECT_EQ(pearson(x, x), 1.0);
  EXPECT_EQ(pearson(x, -x), -1.0);
}

TEST(Pearson, SmallHandValue) {
  Eigen::Vector3d x(1, 2, 3), y(1, 2, 4);
  // cov = 1, sd_x = sqrt(2/3), sd_y = sqrt(14)/3
  const double expected = 1.0 / (std::sqrt(2.0 / 3.0) * std::sqrt(14.0) / 3.0);
  EXPECT_NEAR(pearson(x, y), expected, 1e-15);
  EXPECT_NEAR(pearson(x, y), 0.98198050606196585, 1e-15);
}

TEST(Pearson, ConstantInputIsDegenerate) {
  Eigen::Vector3d x(1, 1, 1), y(1, 2, 3);
  try {
    pearson(x, y);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateInput);
  }
}

TEST(UpperQuantile, OneInAThousand) {
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(1000, 1.0, 1000.0);
  EXPECT_EQ(upper_quantile(x, 0.1), 999.0);
}

TEST(UpperQuantile, QuarterOfFour) {
  Eigen::Vector4d x(4, 1, 3, 2);
  EXPECT_EQ(upper_quantile(x, 25.0), 3.0);
}

TEST(UpperQuantile, ConstantInput) {
  Eigen::VectorXd x = Eigen::VectorXd::Constant(50, 7.25);
  EXPECT_EQ(upper_quantile(x, 0.1), 7.25);
  EXPECT_EQ(upper_quantile(x, 40.0), 7.25);
}

TEST(UpperQuantile, MatchesOracleOnRandomInput) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(1, 300);
  std::uniform_int_distribution<int> level(0, 9);  // many ties
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    for (double& e : v) e = level(rng);
    const Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
    for (double alpha : {0.1, 1.0, 12.5, 50.0, 99.0})
      EXPECT_EQ(upper_quantile(x, alpha), oracle::upper_quantile(v, alpha));
  }
}

TEST(UpperQuantile, RejectsBadLevel) {
  Eigen::Vector3d x(1, 2, 3);
  EXPECT_THROW(upper_quantile(x, 0.0), Error);
  EXPECT_THROW(upper_quantile(x, 100.0), Error);
}

TEST(Standardize, ZeroVariancePolicy) {
  Eigen::Vector3d x(5, 5, 5);
  EXPECT_EQ(standardize(x), Eigen::Vector3d::Zero());
}

TEST(Standardize, TwoPoints) {
  Eigen::Vector2d x(0, 2);
  EXPECT_EQ(standardize(x), Eigen::Vector2d(-1, 1));
}

TEST(Standardize, MeanZeroUnitVariance) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(4.0, 3.0);
  Eigen::VectorXd x(1000);
  for (auto& v : x) v = g(rng);
  const Eigen::VectorXd z = standardize(x);
  const SummaryStats s = summary_stats(z);
  EXPECT_NEAR(s.mean, 0.0, 1e-12);
  EXPECT_NEAR(s.std, 1.0, 1e-12);
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  for (unsigned workers : {1U, 2U, 3U, 8U}) {
    std::vector<int> hits(97, 0);
    parallel_for(97, workers, [&](std::size_t k) { ++hits[k]; });
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 4,
                            [](std::size_t k) {
                              if (k == 7) fail(ErrorCode::InvalidArgument, "boom");
                            }),
               Error);
}

TEST(Pearson, SymmetricAndAffineInvariant) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd x(500), y(500);
  for (Eigen::Index t = 0; t < 500; ++t) {
    x(t) = g(rng);
    y(t) = 0.4 * x(t) + g(rng);
  }
  EXPECT_EQ(pearson(x, y), pearson(y, x));
  const Eigen::VectorXd scaled = (x.array() * 2.5 + 7.0).matrix();
  EXPECT_NEAR(pearson(scaled, y), pearson(x, y), 1e-10);
}

TEST(UpperQuantile, ReturnsAnElement) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd x(321);
  for (auto& v : x) v = g(rng);
  for (double alpha : {0.1, 3.0, 50.0}) {
    const double q = upper_quantile(x, alpha);
    EXPECT_TRUE((x.array() == q).any());
  }
}

TEST(Standardize, Idempotent) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-3.0, 10.0);
  Eigen::VectorXd x(200);
  for (auto& v : x) v = u(rng);
  const Eigen::VectorXd once = standardize(x);
  EXPECT_LT((standardize(once) - once).cwiseAbs().maxCoeff(), 1e-10);
}
