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
#include <random>

#include "ace/blackbox.hpp"
#include "ace/explainers.hpp"

namespace ace {
namespace {

SurrogateModel model(std::initializer_list<double> w, double b = 0.0) {
  SurrogateModel m;
  m.weights = Eigen::Map<const VectorXd>(w.begin(), static_cast<Index>(w.size()));
  m.bias = b;
  return m;
}

Instance continuous(std::initializer_list<double> v) {
  const VectorXd values = Eigen::Map<const VectorXd>(v.begin(), static_cast<Index>(v.size()));
  return Instance(make_uniform_schema(values.size(), FeatureKind::kContinuous), values);
}

// Neighbors and kernel weights around `x` scored by a positive linear black box.
NeighborhoodSample linear_sample(const Instance& x, const VectorXd& w, double b, Index n, std::uint64_t seed) {
  const LinearScorer f(x.schema_ptr(), w, b);
  return build_sample(x, f, SamplerConfig{n, 0.01, 0.1, seed}, {});
}

TEST(FitAceTest, HandSolvedNormalEquations) {
  // Augmented rows [1,0,1], [0,1,1], [1,1,1]; kernel weights 1, 1/2, 1/4; scores
  // 1, 2, 4. The alpha = 1 normal equations solve exactly to [8, 15, 13] / 19.
  NeighborhoodSample sample;
  sample.neighbors.resize(3, 2);
  sample.neighbors << 1, 0, 0, 1, 1, 1;
  sample.scores.resize(3);
  sample.scores << 1, 2, 4;
  sample.kernel_weights.resize(3);
  sample.kernel_weights << 1.0, 0.5, 0.25;
  const SurrogateModel m = fit_ace(sample, AceConfig{1.0, 10});
  EXPECT_NEAR(m.weights[0], 8.0 / 19.0, 1e-9);
  EXPECT_NEAR(m.weights[1], 15.0 / 19.0, 1e-9);
  EXPECT_NEAR(m.bias, 13.0 / 19.0, 1e-9);
}

TEST(FitAceTest, NoiselessRecoveryWithoutRegularization) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const Index n = 200, m = 6;
  VectorXd w(m);
  w << 1.5, -2.0, 0.25, 3.0, 0.0, -0.75;
  const double b = 0.8;
  NeighborhoodSample sample;
  sample.neighbors = MatrixXd::NullaryExpr(n, m, [&] { return g(rng); });
  sample.scores = (sample.neighbors * w).array() + b;
  sample.kernel_weights = VectorXd::Ones(n);
  const SurrogateModel fit = fit_ace(sample, AceConfig{0.0, 10});
  EXPECT_LT((fit.weights - w).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(fit.bias, b, 1e-6);
}

TEST(FitAceTest, HeavyRegularizationShrinksToZero) {
  const Instance x = continuous({0.5, 1.0, -0.3});
  const NeighborhoodSample sample = linear_sample(x, VectorXd::Constant(3, 2.0), 5.0, 300, 2);
  const SurrogateModel fit = fit_ace(sample, AceConfig{1e12, 10});
  EXPECT_LT(fit.weights.cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT(std::abs(fit.bias), 1e-6);
}

TEST(FitAceTest, ClosedFormIsTheLossMinimum) {
  const Instance x = continuous({0.5, 1.0, -0.3, 2.0});
  VectorXd w(4);
  w << 1.0, -0.5, 2.0, 0.3;
  const NeighborhoodSample sample = linear_sample(x, w, 4.0, 400, 3);
  const SurrogateModel fit = fit_ace(sample, AceConfig{});
  const double best = ace_loss(fit, sample, 1.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1e-3);
  for (int t = 0; t < 50; ++t) {
    SurrogateModel p = fit;
    for (Index i = 0; i < 4; ++i) p.weights[i] += g(rng);
    p.bias += g(rng);
    EXPECT_GE(ace_loss(p, sample, 1.0), best);
  }
}

TEST(AceLossTest, ConvexityProbe) {
  const Instance x = continuous({0.2, -1.0, 0.7});
  VectorXd w(3);
  w << 1.0, -2.0, 0.5;
  const NeighborhoodSample sample = linear_sample(x, w, 6.0, 200, 4);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, 2.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    SurrogateModel a, b;
    a.weights = VectorXd::NullaryExpr(3, [&] { return g(rng); });
    b.weights = VectorXd::NullaryExpr(3, [&] { return g(rng); });
    a.bias = g(rng);
    b.bias = g(rng);
    const double t = u(rng);
    SurrogateModel mix;
    mix.weights = t * a.weights + (1.0 - t) * b.weights;
    mix.bias = t * a.bias + (1.0 - t) * b.bias;
    EXPECT_LE(ace_loss(mix, sample, 1.0), t * ace_loss(a, sample, 1.0) + (1.0 - t) * ace_loss(b, sample, 1.0) + 1e-9);
  }
}

TEST(ExplainAceTest, SymmetricProductsAreUniform) {
  const Explanation e = explain_ace(continuous({1.0, 1.0}), model({1.0, 1.0}), AceConfig{});
  EXPECT_NEAR(e.contributions()[0], 0.5, 1e-15);
  const Explanation neg = explain_ace(continuous({2.0, -4.0, 1.0}), model({-1.0, 0.5, -2.0}), AceConfig{});
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(neg.contributions()[i], 1.0 / 3.0, 1e-12);
}

TEST(ExplainAceTest, LargeValueDominatesDespiteSmallWeight) {
  const Explanation e = explain_ace(continuous({1000.0, 1.0}), model({0.01, 0.01}), AceConfig{});
  EXPECT_NEAR(e.contributions()[0], 0.9347404844713861, 1e-12);
  EXPECT_NEAR(e.contributions()[0], 0.935, 1e-3);
  EXPECT_EQ(e.method(), Method::kAce);
}

TEST(ExplainAceTest, BiasDoesNotContribute) {
  const Explanation a = explain_ace(continuous({1.0, 2.0}), model({1.0, 0.5}, 0.0), AceConfig{});
  const Explanation b = explain_ace(continuous({1.0, 2.0}), model({1.0, 0.5}, 100.0), AceConfig{});
  EXPECT_EQ(a.contributions(), b.contributions());
}

TEST(LimeTest, Examples) {
  const Explanation small = lime_attribution(model({0.01, 0.01}), 10);
  EXPECT_NEAR(small.contributions()[0], 0.5, 1e-15);
  const Explanation one = lime_attribution(model({2.0, 0.0}), 10);
  EXPECT_EQ(one.contributions()[0], 1.0);
  EXPECT_EQ(one.contributions()[1], 0.0);
  const Explanation sym = lime_attribution(model({1.0, -1.0}), 10);
  EXPECT_NEAR(sym.contributions()[1], 0.5, 1e-15);
  EXPECT_EQ(sym.method(), Method::kLimeRegression);
}

TEST(LimeTest, ZeroWeightsAreDegenerate) {
  try {
    lime_attribution(model({0.0, 0.0}), 10);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateExplanation);
  }
}

TEST(AceKlTest, RegularizerHandValue) {
  // Products [1, 0] give Q = [sp(1), ln 2] / (sp(1) + ln 2); KL(U || Q) by hand.
  EXPECT_NEAR(ace_kl_regularizer(model({1.0, 0.0}), continuous({1.0, 1.0})), 0.050198830821710644, 1e-12);
  EXPECT_NEAR(ace_kl_regularizer(model({2.0, 1.0, 0.5}), continuous({1.0, 2.0, 4.0})), 0.0, 1e-15);
}

TEST(AceKlTest, ZeroBetaLossIsAceLoss) {
  const Instance x = continuous({0.3, 1.2, -0.4});
  const NeighborhoodSample sample = linear_sample(x, VectorXd::Constant(3, 1.0), 3.0, 100, 6);
  AceKlConfig cfg;
  cfg.beta = 0.0;
  const SurrogateModel m = model({0.3, -0.2, 0.9}, 1.0);
  EXPECT_EQ(ace_kl_loss(m, sample, x, cfg), ace_loss(m, sample, cfg.alpha));
}

TEST(AceKlTest, ZeroBetaFitIsAceFit) {
  const Instance x = continuous({0.3, 1.2, -0.4, 0.8, 1.0});
  VectorXd w(5);
  w << 1.0, 2.0, -0.5, 0.3, 0.0;
  const NeighborhoodSample sample = linear_sample(x, w, 4.0, 1000, 7);
  AceKlConfig cfg;
  cfg.beta = 0.0;
  const SurrogateModel kl = fit_ace_kl(sample, x, cfg);
  const SurrogateModel ace = fit_ace(sample, cfg.ridge());
  EXPECT_LT((kl.weights - ace.weights).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(kl.bias, ace.bias, 1e-6);
}

TEST(AceKlTest, GradientMatchesCentralDifferences) {
  const Instance x = continuous({0.5, -1.5, 2.0, 0.1, 1.0});
  VectorXd w(5);
  w << 0.8, -0.4, 1.1, 2.0, 0.3;
  const NeighborhoodSample sample = linear_sample(x, w, 3.0, 500, 8);
  const AceKlConfig cfg;
  for (const SurrogateModel& m : {model({0.3, -0.2, 0.9, 1.4, -0.7}, 1.0), model({1.0, 1.0, 1.0, 1.0, 1.0}, -2.0),
                                  model({-3.0, 0.1, 0.0, 0.5, 2.0}, 0.4)}) {
    const VectorXd g = ace_kl_gradient(m, sample, x, cfg);
    const VectorXd theta = m.augmented();
    ASSERT_EQ(g.size(), theta.size());
    for (Index i = 0; i < theta.size(); ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(theta[i]));
      VectorXd up = theta, down = theta;
      up[i] += h;
      down[i] -= h;
      const double fd = (ace_kl_loss(SurrogateModel::from_augmented(up), sample, x, cfg) -
                         ace_kl_loss(SurrogateModel::from_augmented(down), sample, x, cfg)) /
                        (2.0 * h);
      EXPECT_LE(std::abs(fd - g[i]), 1e-4 * std::max(1.0, std::abs(g[i]))) << "coordinate " << i;
    }
  }
}

TEST(AceKlTest, SharpensContributions) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  for (int fixture = 0; fixture < 10; ++fixture) {
    const Index m = 4 + fixture;
    const VectorXd xv = VectorXd::NullaryExpr(m, [&] { return g(rng); });
    const Instance x(make_uniform_schema(m, FeatureKind::kContinuous), xv);
    const VectorXd w = VectorXd::NullaryExpr(m, [&] { return g(rng); });
    const double b = w.cwiseAbs().sum() * xv.cwiseAbs().maxCoeff() + 1.0;  // positive over the neighborhood
    const NeighborhoodSample sample = linear_sample(x, w, b, 2000, 100 + fixture);
    const AceKlConfig cfg;
    const Explanation ace = explain_ace(x, fit_ace(sample, cfg.ridge()), cfg.ridge());
    const AceKlFit kl = optimize_ace_kl(sample, x, cfg);
    const Explanation sharp = explain_surrogate(x, kl.model, cfg.top_k, Method::kAceKl);
    EXPECT_LE(shannon_entropy(sharp.contributions()), shannon_entropy(ace.contributions()) + 1e-12)
        << "fixture " << fixture;
    EXPECT_LE(kl.loss, ace_kl_loss(fit_ace(sample, cfg.ridge()), sample, x, cfg));
  }
}

TEST(ReconstructionBaselineTest, Examples) {
  const SchemaPtr s = make_uniform_schema(3, FeatureKind::kContinuous);
  MatrixXd basis = MatrixXd::Zero(3, 1);
  basis(0, 0) = 1.0;
  const ReconstructionScorer f(s, basis, VectorXd::Zero(3), VectorXd::Ones(3));
  VectorXd v(3);
  v << 4.0, 0.0, 0.0;
  try {
    explain_reconstruction_baseline(Instance(s, v), f, AceConfig{});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateExplanation);
  }
  v << 4.0, 0.0, 2.0;
  const Explanation one = explain_reconstruction_baseline(Instance(s, v), f, AceConfig{});
  EXPECT_EQ(one.contributions()[2], 1.0);
  EXPECT_EQ(one.method(), Method::kReconstruction);
  v << 4.0, -1.5, 1.5;
  const Explanation pair = explain_reconstruction_baseline(Instance(s, v), f, AceConfig{});
  EXPECT_NEAR(pair.contributions()[1], 0.5, 1e-15);
  EXPECT_NEAR(pair.contributions()[2], 0.5, 1e-15);
}

TEST(ExplainMethodsTest, AllMethodsGiveDistributionsDeterministically) {
  const SchemaPtr s = make_uniform_schema(5, FeatureKind::kContinuous);
  MatrixXd basis = MatrixXd::Zero(5, 2);
  basis(0, 0) = basis(1, 1) = 1.0;
  const ReconstructionScorer f(s, basis, VectorXd::Zero(5), VectorXd::Ones(5));
  VectorXd v(5);
  v << 0.1, -0.2, 3.0, 0.5, -0.4;
  const Instance x(s, v);
  const std::vector<Method> methods{Method::kAce, Method::kAceKl, Method::kLimeRegression, Method::kReconstruction};
  ExplainConfig cfg;
  cfg.sampler.n_neighbors = 1000;
  cfg.sampler.seed = 12;
  const auto first = explain_methods(x, f, methods, cfg);
  const auto second = explain_methods(x, f, methods, cfg);
  ASSERT_EQ(first.size(), 4u);
  for (size_t k = 0; k < first.size(); ++k) {
    EXPECT_EQ(first[k].method(), methods[k]);
    EXPECT_TRUE(is_distribution(first[k].contributions()));
    EXPECT_EQ(first[k].contributions(), second[k].contributions());
    EXPECT_EQ(first[k].ranking().front(), 2);
  }
}

TEST(ExplainMethodsTest, ReconstructionBaselineNeedsReconstructionScorer) {
  const SchemaPtr s = make_uniform_schema(3, FeatureKind::kBinary);
  const NaiveBayesScorer f(s, VectorXd::Constant(3, 0.3));
  const std::vector<Method> methods{Method::kReconstruction};
  try {
    explain_methods(Instance(s, VectorXd::Ones(3)), f, methods, ExplainConfig{});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

}  // namespace
}  // namespace ace
