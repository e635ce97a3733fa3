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

#include "ace/datagen.hpp"

#include <algorithm>
#include <set>

namespace ace {

std::vector<std::string> CountSchemaSpec::feature_names() const {
  std::vector<std::string> names;
  for (const std::string& activity : activities) {
    for (Index bin = 0; bin < time_bins; ++bin) names.push_back(activity + "_" + std::to_string(bin));
  }
  return names;
}

SchemaPtr CountSchemaSpec::schema() const {
  std::vector<Feature> features;
  for (std::string& name : feature_names()) features.push_back({std::move(name), FeatureKind::kContinuous});
  return make_schema(std::move(features));
}

void CountSchemaSpec::validate() const {
  if (activities.empty()) fail(ErrorCode::kInvalidArgument, "count spec: no activities");
  if (time_bins < 1) fail(ErrorCode::kInvalidArgument, "count spec: time_bins must be positive");
  if (rates.size() != dimension()) {
    fail(ErrorCode::kInvalidArgument, "count spec: expected " + std::to_string(dimension()) + " rates, got " +
                                          std::to_string(rates.size()));
  }
  if (!rates.allFinite() || (rates.array() <= 0.0).any()) {
    fail(ErrorCode::kInvalidArgument, "count spec: every rate must be positive");
  }
}

CountSchemaSpec make_default_count_spec(std::uint64_t seed) {
  CountSchemaSpec spec;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> rate(kDefaultMinRate, kDefaultMaxRate);
  spec.rates.resize(spec.dimension());
  for (Index i = 0; i < spec.rates.size(); ++i) spec.rates[i] = rate(rng);
  return spec;
}

Dataset generate_counts(const CountSchemaSpec& spec, Index n_rows, std::uint64_t seed) {
  spec.validate();
  if (n_rows < 0) fail(ErrorCode::kInvalidArgument, "row count must be non-negative");
  std::mt19937_64 rng(seed);
  std::vector<std::poisson_distribution<long>> draws;
  for (Index i = 0; i < spec.dimension(); ++i) draws.emplace_back(spec.rates[i]);

  Dataset out{spec.schema(), MatrixXd(n_rows, spec.dimension())};
  for (Index r = 0; r < n_rows; ++r) {
    for (Index i = 0; i < spec.dimension(); ++i) out.rows(r, i) = static_cast<double>(draws[static_cast<size_t>(i)](rng));
  }
  return out;
}

InjectionRecord inject_anomaly(const Instance& base, std::vector<Index> indices, const CountSchemaSpec& spec) {
  spec.validate();
  if (base.dimension() != spec.dimension()) fail(ErrorCode::kInvalidArgument, "instance does not match count spec");
  if (indices.empty()) fail(ErrorCode::kInvalidArgument, "injection needs at least one feature index");
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    fail(ErrorCode::kInvalidArgument, "injection indices must be distinct");
  }
  if (indices.front() < 0 || indices.back() >= spec.dimension()) {
    fail(ErrorCode::kInvalidArgument, "injection index out of range");
  }
  InjectionRecord record;
  record.base = base.values();
  record.perturbed = base.values();
  record.injected_deltas.resize(static_cast<Index>(indices.size()));
  for (size_t k = 0; k < indices.size(); ++k) {
    const Index i = indices[k];
    record.perturbed[i] += spec.rates[i];
    record.injected_deltas[static_cast<Index>(k)] = spec.rates[i];
  }
  record.perturbed_indices = std::move(indices);
  return record;
}

std::vector<Index> choose_indices(Index dimension, Index count, std::mt19937_64& rng) {
  if (count < 1 || count > dimension) fail(ErrorCode::kInvalidArgument, "cannot choose that many indices");
  std::vector<Index> all(static_cast<size_t>(dimension));
  for (Index i = 0; i < dimension; ++i) all[static_cast<size_t>(i)] = i;
  // Partial Fisher-Yates with explicit draws so results do not depend on std::shuffle.
  for (Index k = 0; k < count; ++k) {
    std::uniform_int_distribution<Index> pick(k, dimension - 1);
    std::swap(all[static_cast<size_t>(k)], all[static_cast<size_t>(pick(rng))]);
  }
  std::vector<Index> chosen(all.begin(), all.begin() + count);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

Standardizer::Standardizer(VectorXd mean, VectorXd std) : mean_(std::move(mean)), std_(std::move(std)) {
  if (mean_.size() != std_.size()) fail(ErrorCode::kInvalidArgument, "standardizer: size mismatch");
  if (!mean_.allFinite() || !std_.allFinite() || (std_.array() <= 0.0).any()) {
    fail(ErrorCode::kInvalidArgument, "standardizer: std must be positive and finite");
  }
}

MatrixXd Standardizer::apply_rows(const MatrixXd& rows) const {
  return (rows.rowwise() - mean_.transpose()) * std_.cwiseInverse().asDiagonal();
}

Standardizer fit_standardizer(const Dataset& training) {
  if (training.size() < 1) fail(ErrorCode::kInsufficientData, "standardizer needs at least one training row");
  const double n = static_cast<double>(training.size());
  const VectorXd mean = training.rows.colwise().mean().transpose();
  VectorXd std = ((training.rows.rowwise() - mean.transpose()).colwise().squaredNorm() / n).cwiseSqrt().transpose();
  for (Index i = 0; i < std.size(); ++i) {
    if (!(std[i] > 0.0)) std[i] = 1.0;
  }
  return Standardizer(mean, std);
}

Dataset generate_binary(Index m_features, Index n_rows, const VectorXd& profile, std::uint64_t seed) {
  if (m_features < 1) fail(ErrorCode::kInvalidArgument, "need at least one binary feature");
  if (profile.size() != m_features) fail(ErrorCode::kInvalidArgument, "profile size must equal feature count");
  if (!profile.allFinite() || (profile.array() <= 0.0).any() || (profile.array() >= 1.0).any()) {
    fail(ErrorCode::kInvalidArgument, "profile probabilities must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset out{make_uniform_schema(m_features, FeatureKind::kBinary), MatrixXd(n_rows, m_features)};
  for (Index r = 0; r < n_rows; ++r) {
    for (Index i = 0; i < m_features; ++i) out.rows(r, i) = unit(rng) < profile[i] ? 1.0 : -1.0;
  }
  return out;
}

}  // namespace ace
