/*
 * Copyright 2026 The ACE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>

#include "ace/blackbox.hpp"
#include "ace/neighborhood.hpp"

namespace ace {
namespace {

class ConstantScorer final : public Scorer {
 public:
  ConstantScorer(SchemaPtr schema, double c) : Scorer(std::move(schema)), c_(c) {}

 protected:
  double score_row(const Eigen::Ref<const VectorXd>&) const override { return c_; }

 private:
  double c_;
};

TEST(KernelTest, ZeroDistanceIsOne) {
  const VectorXd x = VectorXd::LinSpaced(4, 0.0, 3.0);
  EXPECT_EQ(kernel_weight(x, x, 2.0), 1.0);
}

TEST(KernelTest, DistanceSigmaIsInverseE) {
  const SchemaPtr s = make_uniform_schema(16, FeatureKind::kContinuous);
  const Instance x(s, VectorXd::Zero(16));
  VectorXd y = VectorXd::Zero(16);
  y[5] = 3.0;  // default width for M = 16 is 3
  EXPECT_NEAR(kernel_weight(x, y, KernelConfig{}), 0.36787944117144233, 1e-15);
}

TEST(KernelTest, DefaultWidth) {
  EXPECT_DOUBLE_EQ(KernelConfig::default_sigma(16), 3.0);
  EXPECT_DOUBLE_EQ(KernelConfig{2.5}.width(16), 2.5);
}

TEST(KernelTest, DimensionMismatch) {
  EXPECT_THROW(kernel_weight(VectorXd::Zero(2), VectorXd::Zero(3), 1.0), Error);
}

TEST(SamplerTest, VanishingVarianceReturnsCenter) {
  const SchemaPtr s = make_uniform_schema(5, FeatureKind::kContinuous);
  const Instance x(s, VectorXd::LinSpaced(5, -2.0, 2.0));
  const MatrixXd n = sample_neighbors(x, SamplerConfig{100, 1e-24, 0.1, 9});
  EXPECT_LT((n.rowwise() - x.values().transpose()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(SamplerTest, BinaryFlipCountIsBinomial) {
  const Index m = 100;
  const Index n = 10000;
  const SchemaPtr s = make_uniform_schema(m, FeatureKind::kBinary);
  const Instance x(s, VectorXd::Ones(m));
  const MatrixXd rows = sample_neighbors(x, SamplerConfig{n, 0.01, 0.1, 42});
  ASSERT_TRUE((rows.array().abs() == 1.0).all());
  const double mean_flips = (rows.array() < 0.0).cast<double>().sum() / static_cast<double>(n);
  // Binomial(100, 0.1) has variance 9; the mean of N draws has sd 3/sqrt(N).
  EXPECT_NEAR(mean_flips, 10.0, 3.0 * 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(SamplerTest, ContinuousMeanAndVariance) {
  const Index n = 20000;
  const SchemaPtr s = make_uniform_schema(3, FeatureKind::kContinuous);
  const Instance x(s, VectorXd::Constant(3, 4.0));
  const MatrixXd rows = sample_neighbors(x, SamplerConfig{n, 0.01, 0.1, 5});
  const VectorXd mean = rows.colwise().mean();
  for (Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(mean[i], 4.0, 4.0 * std::sqrt(0.01 / n));
    const double var = (rows.col(i).array() - mean[i]).square().mean();
    EXPECT_NEAR(var, 0.01, 0.01 * 4.0 * std::sqrt(2.0 / n));
  }
}

TEST(SamplerTest, SameSeedSameMatrix) {
  const SchemaPtr s = make_schema({{"a", FeatureKind::kBinary}, {"b", FeatureKind::kContinuous}});
  VectorXd v(2);
  v << -1.0, 0.3;
  const Instance x(s, v);
  const SamplerConfig cfg{500, 0.01, 0.1, 17};
  EXPECT_EQ(sample_neighbors(x, cfg), sample_neighbors(x, cfg));
  SamplerConfig other = cfg;
  other.seed = 18;
  EXPECT_NE(sample_neighbors(x, cfg), sample_neighbors(x, other));
}

TEST(SamplerTest, RejectsEmpty) {
  const Instance x(make_uniform_schema(2, FeatureKind::kContinuous), VectorXd::Zero(2));
  EXPECT_THROW(sample_neighbors(x, SamplerConfig{0, 0.01, 0.1, 0}), Error);
}

TEST(BuildSampleTest, ConstantScorer) {
  const SchemaPtr s = make_uniform_schema(4, FeatureKind::kContinuous);
  const Instance x(s, VectorXd::Zero(4));
  const NeighborhoodSample sample = build_sample(x, ConstantScorer(s, 2.5), SamplerConfig{50, 0.01, 0.1, 1}, {});
  EXPECT_TRUE((sample.scores.array() == 2.5).all());
}

TEST(BuildSampleTest, VanishingVarianceScoresEqualCenter) {
  const SchemaPtr s = make_uniform_schema(3, FeatureKind::kContinuous);
  const LinearScorer f(s, VectorXd::Constant(3, 2.0), 1.0);
  const Instance x(s, VectorXd::Constant(3, 1.0));
  const NeighborhoodSample sample = build_sample(x, f, SamplerConfig{50, 1e-24, 0.1, 1}, {});
  EXPECT_LT((sample.scores.array() - 7.0).abs().maxCoeff(), 1e-9);
}

TEST(BuildSampleTest, FullSizeSmoke) {
  const SchemaPtr s = make_uniform_schema(12, FeatureKind::kContinuous);
  const LinearScorer f(s, VectorXd::LinSpaced(12, 0.1, 1.2), 5.0);
  const Instance x(s, VectorXd::Ones(12));
  const NeighborhoodSample sample = build_sample(x, f, SamplerConfig{}, {});
  EXPECT_EQ(sample.size(), 5000);
  EXPECT_EQ(sample.dimension(), 12);
  EXPECT_TRUE((sample.kernel_weights.array() > 0.0).all());
  EXPECT_TRUE((sample.kernel_weights.array() <= 1.0).all());
}

}  // namespace
}  // namespace ace
