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

#include "ace/core.hpp"

namespace ace {
namespace {

constexpr double kLn2 = 0.69314718055994530942;

TEST(SoftplusTest, ZeroIsLn2) { EXPECT_NEAR(softplus(0.0), kLn2, 1e-15); }

TEST(SoftplusTest, Asymptotes) {
  EXPECT_NEAR(softplus(-1000.0), 0.0, 1e-12);
  EXPECT_NEAR(softplus(1000.0) / 1000.0, 1.0, 1e-9);
}

TEST(SoftplusTest, RejectsNonFinite) {
  try {
    softplus(std::nan(""));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  EXPECT_THROW(softplus(INFINITY), Error);
}

TEST(ContributionsTest, EqualProductsAreUniform) {
  const VectorXd c2 = contributions(VectorXd::Zero(2));
  EXPECT_NEAR(c2[0], 0.5, 1e-15);
  EXPECT_NEAR(c2[1], 0.5, 1e-15);
  for (double a : {-50.0, -3.0, 0.0, 7.5, 400.0}) {
    const VectorXd c4 = contributions(VectorXd::Constant(4, a));
    for (Index i = 0; i < 4; ++i) EXPECT_NEAR(c4[i], 0.25, 1e-12) << "a=" << a;
  }
}

TEST(ContributionsTest, HandEvaluatedPair) {
  VectorXd products(2);
  products << std::log(std::exp(1.0) - 1.0), 0.0;
  const VectorXd c = contributions(products);
  EXPECT_NEAR(c[0], 1.0 / (1.0 + kLn2), 1e-12);
  EXPECT_NEAR(c[1], kLn2 / (1.0 + kLn2), 1e-12);
  EXPECT_NEAR(c[0], 0.5906161091496412, 1e-12);
}

TEST(ContributionsTest, VanishingMassIsDegenerate) {
  try {
    contributions(VectorXd::Constant(3, -1000.0));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateExplanation);
  }
}

TEST(ContributionsTest, AlwaysADistribution) {
  std::srand(7);
  for (int t = 0; t < 200; ++t) {
    const VectorXd products = VectorXd::Random(9) * 40.0;
    EXPECT_TRUE(is_distribution(contributions(products)));
  }
}

TEST(ProbabilityToScoreTest, Examples) {
  EXPECT_EQ(probability_to_score(0.0).value(), 0.0);
  EXPECT_NEAR(probability_to_score(0.5).value(), kLn2, 1e-15);
  EXPECT_NEAR(probability_to_score(1.0 - std::exp(-3.0)).value(), 3.0, 1e-12);
}

TEST(ProbabilityToScoreTest, RejectsOutOfRange) {
  EXPECT_THROW(probability_to_score(1.0), Error);
  EXPECT_THROW(probability_to_score(-0.1), Error);
}

TEST(AnomalyScoreTest, RejectsNegativeAndNonFinite) {
  EXPECT_THROW(AnomalyScore(-1e-9), Error);
  EXPECT_THROW(AnomalyScore{INFINITY}, Error);
  EXPECT_EQ(AnomalyScore(0.0).value(), 0.0);
}

TEST(SchemaTest, RejectsEmptyAndDuplicateNames) {
  EXPECT_THROW(FeatureSchema({}), Error);
  EXPECT_THROW(FeatureSchema({{"a", FeatureKind::kBinary}, {"a", FeatureKind::kContinuous}}), Error);
}

TEST(SchemaTest, KindIndices) {
  const FeatureSchema s({{"a", FeatureKind::kBinary}, {"b", FeatureKind::kContinuous}, {"c", FeatureKind::kBinary}});
  EXPECT_EQ(s.binary_indices(), (std::vector<Index>{0, 2}));
  EXPECT_EQ(s.continuous_indices(), (std::vector<Index>{1}));
  EXPECT_FALSE(s.all_binary());
}

TEST(InstanceTest, ValidatesValues) {
  const SchemaPtr binary = make_uniform_schema(2, FeatureKind::kBinary);
  EXPECT_NO_THROW(Instance(binary, VectorXd::Constant(2, -1.0)));
  EXPECT_THROW(Instance(binary, VectorXd::Zero(2)), Error);
  const SchemaPtr cont = make_uniform_schema(2, FeatureKind::kContinuous);
  EXPECT_THROW(Instance(cont, VectorXd::Zero(3)), Error);
  VectorXd bad = VectorXd::Zero(2);
  bad[1] = std::nan("");
  EXPECT_THROW(Instance(cont, bad), Error);
}

TEST(ExplanationTest, RanksDescendingWithStableTies) {
  VectorXd c(4);
  c << 0.1, 0.4, 0.1, 0.4;
  const Explanation e(c, Method::kAce, 3);
  ASSERT_EQ(e.ranked_top_k().size(), 3u);
  EXPECT_EQ(e.ranked_top_k()[0].index, 1);
  EXPECT_EQ(e.ranked_top_k()[1].index, 3);
  EXPECT_EQ(e.ranked_top_k()[2].index, 0);
}

TEST(ExplanationTest, TopKIsClampedToDimension) {
  const Explanation e(VectorXd::Constant(2, 0.5), Method::kAce, 10);
  EXPECT_EQ(e.ranked_top_k().size(), 2u);
}

TEST(ExplanationTest, RejectsNonDistribution) {
  EXPECT_THROW(Explanation(VectorXd::Constant(2, 0.6), Method::kAce, 1), Error);
  VectorXd neg(2);
  neg << 1.2, -0.2;
  EXPECT_THROW(Explanation(neg, Method::kAce, 1), Error);
}

TEST(MethodTest, ParsesNamesAndAliases) {
  EXPECT_EQ(parse_method("ACE_KL"), Method::kAceKl);
  EXPECT_EQ(parse_method("ace-kl"), Method::kAceKl);
  EXPECT_EQ(parse_method("lime"), Method::kLimeRegression);
  EXPECT_EQ(parse_method("AE_RECON"), Method::kReconstruction);
  EXPECT_THROW(parse_method("shap"), Error);
  EXPECT_EQ(parse_method_list("ace,lime").size(), 2u);
  EXPECT_THROW(parse_method_list("ace,ACE"), Error);
  EXPECT_THROW(parse_method_list(""), Error);
}

TEST(KlDivergenceTest, HandValues) {
  VectorXd p(2), q(2);
  p << 1.0, 0.0;
  q << 0.5, 0.5;
  EXPECT_NEAR(kl_divergence(p, q), kLn2, 1e-12);
  p << 0.5, 0.5;
  q << 0.25, 0.75;
  EXPECT_NEAR(kl_divergence(p, q), 0.14384103622589042, 1e-12);
  EXPECT_EQ(kl_divergence(q, q), 0.0);
}

TEST(EntropyTest, UniformIsLogM) {
  EXPECT_NEAR(shannon_entropy(VectorXd::Constant(8, 0.125)), std::log(8.0), 1e-14);
  VectorXd one_hot = VectorXd::Zero(3);
  one_hot[1] = 1.0;
  EXPECT_EQ(shannon_entropy(one_hot), 0.0);
}

TEST(ErrorTest, ExitCodes) {
  EXPECT_EQ(exit_code_for(ErrorCode::kInvalidArgument), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::kInsufficientData), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::kScorerUnavailable), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::kProtocolViolation), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::kDegenerateExplanation), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::kNumericalFailure), 4);
}

}  // namespace
}  // namespace ace
