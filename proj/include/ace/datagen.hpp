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

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ace/core.hpp"

namespace ace {

// Count-feature layout: one Poisson feature per (activity, time bin).
struct CountSchemaSpec {
  std::vector<std::string> activities{"www_visit", "www_upload", "www_download"};
  Index time_bins = 4;
  VectorXd rates;  // lambda_i, one per feature, activity-major

  Index dimension() const { return static_cast<Index>(activities.size()) * time_bins; }
  // "<activity>_<bin>", activity-major.
  std::vector<std::string> feature_names() const;
  SchemaPtr schema() const;
  void validate() const;
};

inline constexpr int kDefaultMinRate = 25;
inline constexpr int kDefaultMaxRate = 200;

// Default layout (3 activities x 4 bins) with rates drawn once from
// Uniform{kDefaultMinRate..kDefaultMaxRate}.
CountSchemaSpec make_default_count_spec(std::uint64_t seed);

struct InjectionRecord {
  VectorXd base;
  VectorXd perturbed;
  std::vector<Index> perturbed_indices;  // ascending
  VectorXd injected_deltas;              // one per perturbed index
};

// Each row, each feature i ~ Poisson(rate_i).
Dataset generate_counts(const CountSchemaSpec& spec, Index n_rows, std::uint64_t seed);

// x'_i = x_i + rate_i on the perturbed indices, unchanged elsewhere.
InjectionRecord inject_anomaly(const Instance& base, std::vector<Index> indices, const CountSchemaSpec& spec);

// `count` distinct indices from [0, dimension), ascending.
std::vector<Index> choose_indices(Index dimension, Index count, std::mt19937_64& rng);

// Affine map to training-set z-scores. Constant features keep std 1.
class Standardizer {
 public:
  Standardizer(VectorXd mean, VectorXd std);

  const VectorXd& mean() const { return mean_; }
  const VectorXd& std() const { return std_; }

  VectorXd apply(const Eigen::Ref<const VectorXd>& x) const { return (x - mean_).cwiseQuotient(std_); }
  VectorXd invert(const Eigen::Ref<const VectorXd>& z) const { return z.cwiseProduct(std_) + mean_; }
  Instance apply(const Instance& x) const { return x.with_values(apply(x.values())); }
  MatrixXd apply_rows(const MatrixXd& rows) const;

 private:
  VectorXd mean_;
  VectorXd std_;
};

// Population statistics (divide by n) of the training rows.
Standardizer fit_standardizer(const Dataset& training);

// Each feature is +1 with its profile probability, else -1.
Dataset generate_binary(Index m_features, Index n_rows, const VectorXd& profile, std::uint64_t seed);

}  // namespace ace
