#include "rlos/pattern_matching.hpp"
#include "rlos/random.hpp"
#include "rlos/synthetic.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace rlos;

namespace {

// Fluctuations repeating with period `p`, columns t = 0 .. T-1.
Eigen::MatrixXd periodic(const Eigen::MatrixXd& cycle, Index T) {
  Eigen::MatrixXd x(cycle.rows(), T);
  for (Index t = 0; t < T; ++t) x.col(t) = cycle.col(t % cycle.cols());
  return x;
}

std::vector<double> flat(const Eigen::MatrixXd& m) {
  std::vector<double> v;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
  }
  return v;
}

}  // namespace

TEST(Background, IndexingExamples) {
  Eigen::MatrixXd x(1, 5);
  x << 1.1, 0.9, 1.2, 1.0, 1.05;
  const auto b = background(x, 4, 3);
  ASSERT_EQ(b.values.cols(), 3);
  EXPECT_EQ(b.values, (Eigen::MatrixXd(1, 3) << 0.9, 1.2, 1.0).finished());
  const auto c = background(x, 5, 2);
  EXPECT_EQ(c.values(0, 0), x(0, 3));
  EXPECT_EQ(c.values(0, 1), x(0, 4));
  EXPECT_THROW(background(x, 1, 2), ValidationError);
}

TEST(Background, ConstantMarketIsAllOnes) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Const;
  spec.periods = 10;
  const AssetPanel p = generate_panel(spec);
  EXPECT_TRUE((background(p, 6, 4).values.array() == 1.0).all());
}

TEST(Similarity, Examples) {
  auto bm = [](std::initializer_list<double> v) {
    BackgroundMatrix m;
    m.values = Eigen::Map<const Eigen::MatrixXd>(v.begin(), 2, 2);
    return m;
  };
  const auto a = bm({1, 2, 3, 4});
  EXPECT_NEAR(similarity(a, a), 1.0, 1e-15);
  EXPECT_NEAR(similarity(a, bm({4, 3, 2, 1})), -1.0, 1e-15);
  EXPECT_NEAR(similarity(a, bm({1, 2, 3, 5})), oracle::pearson({1, 2, 3, 4}, {1, 2, 3, 5}), 1e-15);
  EXPECT_NEAR(similarity(a, bm({1, 2, 3, 5})), 0.9827, 5e-5);
  EXPECT_EQ(similarity(a, bm({1, 1, 1, 1})), 0.0);
  BackgroundMatrix wrong;
  wrong.values = Eigen::MatrixXd::Ones(1, 4);
  EXPECT_THROW(similarity(a, wrong), ValidationError);
}

TEST(Similarity, MatchesTextbookPearsonOnRandomData) {
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    BackgroundMatrix a;
    BackgroundMatrix b;
    a.values = Eigen::MatrixXd::NullaryExpr(3, 5, [&] { return rng.uniform(0.9, 1.1); });
    b.values = Eigen::MatrixXd::NullaryExpr(3, 5, [&] { return rng.uniform(0.9, 1.1); });
    EXPECT_NEAR(similarity(a, b), oracle::pearson(flat(a.values), flat(b.values)), 1e-12);
  }
}

TEST(SimilarSet, ThresholdOneIsEmpty) {
  Rng rng(3);
  const Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(3, 40, [&] { return rng.uniform(0.9, 1.1); });
  EXPECT_TRUE(similar_set(x, 30, 5, 1.0).indices.empty());
}

TEST(SimilarSet, ConstantMarketIsEmpty) {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(2, 30);
  EXPECT_TRUE(similar_set(x, 20, 4, 0.0).indices.empty());
  EXPECT_THROW(similar_set(x, 4, 4, 0.0), ValidationError);
}

TEST(SimilarSet, PeriodicPanelFindsPhaseAlignedPeriods) {
  Eigen::MatrixXd cycle(2, 4);
  cycle << 1.10, 0.90, 1.05, 0.97, 0.95, 1.08, 0.99, 1.02;
  const Eigen::MatrixXd x = periodic(cycle, 60);
  const Index k = 48;
  const Index n = 3;
  const auto s = similar_set(x, k, n, 0.99);
  std::vector<Index> expected;
  for (Index i = n; i < k; ++i) {
    if (i % 4 == k % 4) expected.push_back(i);
  }
  EXPECT_EQ(s.indices, expected);
  // Cross-check the strict threshold against the textbook formula.
  for (Index i = n; i < k; ++i) {
    const double r = oracle::pearson(flat(x.middleCols(i - n, n)), flat(x.middleCols(k - n, n)));
    const bool in = std::find(s.indices.begin(), s.indices.end(), i) != s.indices.end();
    EXPECT_EQ(in, r > 0.99) << i;
  }
}

TEST(EstimateMoments, UnbiasedSampleStatistics) {
  Eigen::MatrixXd x(2, 4);
  x << 1.0, 1.2, 0.9, 1.1, 1.0, 0.8, 1.1, 1.05;
  const auto m = estimate_moments(x, {0, 1, 3});
  EXPECT_NEAR(m.mu(0), (1.0 + 1.2 + 1.1) / 3, 1e-15);
  double c01 = 0.0;
  for (Index j : {0, 1, 3}) c01 += (x(0, j) - m.mu(0)) * (x(1, j) - m.mu(1));
  EXPECT_NEAR(m.sigma(0, 1), c01 / 2.0, 1e-15);
  EXPECT_EQ(m.sigma(0, 1), m.sigma(1, 0));
  EXPECT_EQ(m.sample_count, 3);
  EXPECT_THROW(estimate_moments(x, {1}), ValidationError);
}

TEST(RlosPortfolio, FallsBackToUniformWithoutSimilarPeriods) {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(3, 30);
  const auto b = rlos_portfolio(x, 25, {});
  EXPECT_TRUE(b.isApprox(Eigen::VectorXd::Constant(3, 1.0 / 3.0)));
  EXPECT_THROW(rlos_portfolio(x, 2, {}), ValidationError);
}

TEST(RlosPortfolio, SingleQualifyingSpanReturnsItsAllocation) {
  Rng rng(21);
  const Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(3, 40, [&] { return rng.uniform(0.95, 1.08); });
  RlosParameters params;
  params.max_span = 2;
  params.threshold = 0.0;
  const auto set = similar_set(x, 35, 2, 0.0);
  ASSERT_GE(set.indices.size(), 2u);
  const auto expected = optimize_allocation(estimate_moments(x, set.indices), params.constraints, params.solver);
  const auto b = rlos_portfolio(x, 35, params);
  EXPECT_LE((b - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RlosPortfolio, PeriodicMarketPicksThePhaseWinner) {
  Eigen::MatrixXd cycle(2, 3);
  cycle << 1.1, 0.9, 1.0, 0.95, 1.05, 1.0;
  const Eigen::MatrixXd x = periodic(cycle, 80);
  RlosParameters params;
  params.max_span = 6;
  params.threshold = 0.99;
  const auto b = rlos_portfolio(x, 60, params);  // 60 ≡ 0: (1.1, 0.95) follows
  EXPECT_NEAR(b(0), 1.0, 1e-9);
  double wealth = 1.0;
  double uniform = 1.0;
  for (Index t = 60; t < 72; ++t) {
    wealth *= rlos_portfolio(x, t, params).dot(x.col(t));
    uniform *= 0.5 * x.col(t).sum();
  }
  EXPECT_GT(wealth, uniform);
}

TEST(RlosPortfolio, IgnoresColumnsFromTheDecisionPeriodOn) {
  Rng rng(8);
  Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(3, 60, [&] { return rng.uniform(0.95, 1.08); });
  const auto before = rlos_portfolio(x, 40, {});
  x.rightCols(20).setConstant(3.0);
  EXPECT_EQ(rlos_portfolio(x, 40, {}), before);
  EXPECT_EQ(rlos_portfolio(Eigen::MatrixXd(x.leftCols(40)), 40, {}), before);
}
