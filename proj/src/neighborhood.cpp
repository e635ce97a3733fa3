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

#include "ace/neighborhood.hpp"

#include <random>

namespace ace {

void SamplerConfig::validate() const {
  if (n_neighbors < 1) fail(ErrorCode::kInvalidArgument, "sampler: n_neighbors must be positive");
  if (!(continuous_variance > 0.0) || !std::isfinite(continuous_variance)) {
    fail(ErrorCode::kInvalidArgument, "sampler: continuous_variance must be positive");
  }
  if (!(flip_probability > 0.0 && flip_probability < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "sampler: flip_probability must lie in (0, 1)");
  }
}

double KernelConfig::default_sigma(Index dimension) { return 0.75 * std::sqrt(static_cast<double>(dimension)); }

double KernelConfig::width(Index dimension) const {
  const double s = sigma.value_or(default_sigma(dimension));
  if (!(s > 0.0) || !std::isfinite(s)) fail(ErrorCode::kInvalidArgument, "kernel: sigma must be positive");
  return s;
}

void NeighborhoodSample::validate() const {
  if (neighbors.rows() == 0) fail(ErrorCode::kInvalidArgument, "neighborhood sample is empty");
  if (scores.size() != neighbors.rows() || kernel_weights.size() != neighbors.rows()) {
    fail(ErrorCode::kInvalidArgument, "neighborhood sample: row counts disagree");
  }
}

double kernel_weight(const Instance& x, const VectorXd& neighbor, const KernelConfig& cfg) {
  return kernel_weight(x.values(), neighbor, cfg.width(x.dimension()));
}

VectorXd kernel_weights(const VectorXd& center, const MatrixXd& neighbors, double sigma) {
  if (neighbors.cols() != center.size()) fail(ErrorCode::kInvalidArgument, "kernel_weights: dimension mismatch");
  if (!(sigma > 0.0)) fail(ErrorCode::kInvalidArgument, "kernel_weights: sigma must be positive");
  const VectorXd squared = (neighbors.rowwise() - center.transpose()).rowwise().squaredNorm();
  return (-squared / (sigma * sigma)).array().exp();
}

MatrixXd sample_neighbors(const Instance& x, const SamplerConfig& cfg) {
  cfg.validate();
  const Index m = x.dimension();
  const FeatureSchema& schema = x.schema();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gaussian(0.0, std::sqrt(cfg.continuous_variance));
  std::bernoulli_distribution flip(cfg.flip_probability);

  MatrixXd out(cfg.n_neighbors, m);
  for (Index r = 0; r < cfg.n_neighbors; ++r) {
    for (Index i = 0; i < m; ++i) {
      if (schema.is_binary(i)) {
        out(r, i) = flip(rng) ? -x[i] : x[i];
      } else {
        out(r, i) = x[i] + gaussian(rng);
      }
    }
  }
  return out;
}

NeighborhoodSample build_sample(const Instance& x, const Scorer& scorer, const SamplerConfig& sampler,
                                const KernelConfig& kernel) {
  if (!(x.schema() == scorer.schema())) fail(ErrorCode::kInvalidArgument, "scorer schema does not match instance");
  NeighborhoodSample sample;
  sample.neighbors = sample_neighbors(x, sampler);
  sample.scores = scorer.batch_score(sample.neighbors);
  sample.kernel_weights = kernel_weights(x.values(), sample.neighbors, kernel.width(x.dimension()));
  return sample;
}

}  // namespace ace
