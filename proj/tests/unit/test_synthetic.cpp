#include "rlos/synthetic.hpp"

#include <gtest/gtest.h>

using namespace rlos;

TEST(Generator, KindNames) {
  for (auto k : {GeneratorKind::Const, GeneratorKind::Iid, GeneratorKind::Trend, GeneratorKind::MeanRevert}) {
    EXPECT_EQ(parse_generator_kind(to_string(k)), k);
  }
  EXPECT_EQ(to_string(GeneratorKind::MeanRevert), "meanrevert");
  EXPECT_THROW(parse_generator_kind("random_walk"), ValidationError);
}

TEST(Generator, DeterministicPerSeed) {
  GeneratorSpec spec;
  spec.periods = 80;
  EXPECT_EQ(generate_panel(spec), generate_panel(spec));
  GeneratorSpec other = spec;
  other.seed = 2;
  EXPECT_FALSE(generate_panel(spec) == generate_panel(other));
}

TEST(Generator, PanelMatchesFluctuationsAndChains) {
  for (auto k : {GeneratorKind::Const, GeneratorKind::Trend, GeneratorKind::MeanRevert}) {
    GeneratorSpec spec;
    spec.kind = k;
    spec.assets = 5;
    spec.periods = 60;
    const AssetPanel p = generate_panel(spec);
    EXPECT_NO_THROW(validate_panel(p));
    EXPECT_EQ(p.asset_ids.front(), "S000");
    EXPECT_EQ(p.period_labels.back(), "59");
    const Eigen::MatrixXd x = generate_fluctuations(spec);
    EXPECT_LE((fluctuation_matrix(p) - x).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(p.open.rightCols(59), p.close.leftCols(59));
  }
}

TEST(Generator, ConstIsFlat) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Const;
  const AssetPanel p = generate_panel(spec);
  EXPECT_TRUE((fluctuation_matrix(p).array() == 1.0).all());
  EXPECT_EQ(p.high, p.low);
}

TEST(Generator, TrendFavoursAssetZero) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Trend;
  spec.noise = 0.0;
  spec.assets = 3;
  const Eigen::MatrixXd x = generate_fluctuations(spec);
  EXPECT_TRUE(x.row(0).isApproxToConstant(1.01, 1e-15));
  EXPECT_TRUE((x.bottomRows(2).array() == 1.0).all());
}

TEST(Generator, MeanRevertSwapsRoles) {
  GeneratorSpec spec;
  spec.noise = 0.0;
  spec.assets = 2;
  spec.periods = 8;
  const Eigen::MatrixXd x = generate_fluctuations(spec);
  EXPECT_DOUBLE_EQ(x(0, 0), 1.03);
  EXPECT_DOUBLE_EQ(x(1, 0), 0.97);
  EXPECT_DOUBLE_EQ(x(0, 2), 0.97);
  EXPECT_DOUBLE_EQ(x(1, 3), 1.03);
  EXPECT_DOUBLE_EQ(x(0, 4), 1.03);
}

TEST(Generator, IidDrawsFromSupport) {
  DiscreteDistribution dist;
  dist.support.resize(2, 3);
  dist.support << 1.1, 1.0, 0.9, 0.95, 1.02, 1.05;
  dist.probs = Eigen::Vector2d(0.3, 0.7);
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Iid;
  spec.distribution = dist;
  spec.periods = 4000;
  const Eigen::MatrixXd x = generate_fluctuations(spec);
  ASSERT_EQ(x.rows(), 3);
  double first = 0;
  for (Index t = 0; t < x.cols(); ++t) {
    const bool a = x.col(t) == Eigen::Vector3d(dist.support.row(0));
    const bool b = x.col(t) == Eigen::Vector3d(dist.support.row(1));
    ASSERT_TRUE(a || b);
    first += a;
  }
  // 0.3 with four standard errors of slack.
  EXPECT_NEAR(first / 4000.0, 0.3, 4 * std::sqrt(0.21 / 4000.0));
  spec.distribution.reset();
  EXPECT_THROW(generate_fluctuations(spec), ValidationError);
}

TEST(Generator, RejectsBadSizes) {
  GeneratorSpec spec;
  spec.assets = 0;
  EXPECT_THROW(generate_panel(spec), ValidationError);
  spec = GeneratorSpec{};
  spec.periods = 0;
  EXPECT_THROW(generate_panel(spec), ValidationError);
}
