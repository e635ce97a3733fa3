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

#include "ace/datagen.hpp"

namespace ace {
namespace {

CountSchemaSpec spec_with_rates(std::vector<std::string> activities, Index bins, const VectorXd& rates) {
  CountSchemaSpec spec;
  spec.activities = std::move(activities);
  spec.time_bins = bins;
  spec.rates = rates;
  return spec;
}

TEST(CountSpecTest, FeatureNamesAndValidation) {
  const CountSchemaSpec spec = make_default_count_spec(3);
  EXPECT_EQ(spec.dimension(), 12);
  EXPECT_EQ(spec.feature_names().front(), "www_visit_0");
  EXPECT_EQ(spec.feature_names().back(), "www_download_3");
  EXPECT_TRUE((spec.rates.array() >= kDefaultMinRate).all());
  EXPECT_TRUE((spec.rates.array() <= kDefaultMaxRate).all());
  CountSchemaSpec bad = spec;
  bad.rates[4] = 0.0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(GenerateCountsTest, PoissonMeanConcentrates) {
  const Index n = 10000;
  const Dataset d = generate_counts(spec_with_rates({"a"}, 2, VectorXd::Constant(2, 5.0)), n, 1);
  for (Index i = 0; i < 2; ++i) EXPECT_NEAR(d.rows.col(i).mean(), 5.0, 4.0 * std::sqrt(5.0 / n));
}

TEST(GenerateCountsTest, NonNegativeIntegersAndDeterministic) {
  const CountSchemaSpec spec = make_default_count_spec(0);
  const Dataset a = generate_counts(spec, 200, 8);
  EXPECT_TRUE((a.rows.array() >= 0.0).all());
  EXPECT_TRUE((a.rows.array() == a.rows.array().round()).all());
  EXPECT_EQ(a.rows, generate_counts(spec, 200, 8).rows);
  EXPECT_NE(a.rows, generate_counts(spec, 200, 9).rows);
}

TEST(InjectTest, AddsRateToPerturbedFeaturesOnly) {
  VectorXd rates(3);
  rates << 4.0, 7.0, 9.0;
  const CountSchemaSpec spec = spec_with_rates({"a"}, 3, rates);
  VectorXd base(3);
  base << 3.0, 6.0, 11.0;
  const InjectionRecord r = inject_anomaly(Instance(spec.schema(), base), {1}, spec);
  EXPECT_EQ(r.perturbed[1], 13.0);
  EXPECT_EQ(r.perturbed[0], 3.0);
  EXPECT_EQ(r.perturbed[2], 11.0);
  EXPECT_EQ(r.injected_deltas[0], 7.0);
  EXPECT_THROW(inject_anomaly(Instance(spec.schema(), base), {}, spec), Error);
  EXPECT_THROW(inject_anomaly(Instance(spec.schema(), base), {3}, spec), Error);
}

TEST(InjectTest, PerturbedExpectationIsTwiceRate) {
  const double lambda = 30.0;
  const Index n = 10000;
  const CountSchemaSpec spec = spec_with_rates({"a"}, 1, VectorXd::Constant(1, lambda));
  const Dataset d = generate_counts(spec, n, 5);
  double total = 0.0;
  for (Index r = 0; r < n; ++r) total += inject_anomaly(d.instance(r), {0}, spec).perturbed[0];
  EXPECT_NEAR(total / n, 2.0 * lambda, 4.0 * std::sqrt(lambda / n));
}

TEST(ChooseIndicesTest, DistinctSortedInRange) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::vector<Index> idx = choose_indices(12, 5, rng);
    ASSERT_EQ(idx.size(), 5u);
    EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
    EXPECT_EQ(std::adjacent_find(idx.begin(), idx.end()), idx.end());
    EXPECT_GE(idx.front(), 0);
    EXPECT_LT(idx.back(), 12);
  }
}

TEST(StandardizerTest, Examples) {
  MatrixXd rows(4, 3);
  rows << 1, 5, 10, 2, 5, 20, 3, 5, 30, 6, 5, 40;
  const Dataset d{make_uniform_schema(3, FeatureKind::kContinuous), rows};
  const Standardizer s = fit_standardizer(d);
  const VectorXd mean = rows.colwise().mean();
  EXPECT_LT(s.apply(mean).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(s.std()[1], 1.0);
  VectorXd probe(3);
  probe << 0.0, 8.0, 0.0;
  EXPECT_EQ(s.apply(probe)[1], 3.0);
  std::srand(4);
  for (int t = 0; t < 50; ++t) {
    const VectorXd x = VectorXd::Random(3) * 100.0;
    EXPECT_LT((s.invert(s.apply(x)) - x).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(GenerateBinaryTest, BalancedProfileHasZeroMean) {
  const Index n = 10000;
  const Dataset d = generate_binary(5, n, VectorXd::Constant(5, 0.5), 2);
  EXPECT_TRUE(d.schema->all_binary());
  EXPECT_TRUE((d.rows.array().abs() == 1.0).all());
  for (Index i = 0; i < 5; ++i) EXPECT_NEAR(d.rows.col(i).mean(), 0.0, 4.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_THROW(generate_binary(2, 10, VectorXd::Constant(2, 1.0), 2), Error);
}

}  // namespace
}  // namespace ace
