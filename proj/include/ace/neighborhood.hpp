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
#include <optional>

#include "ace/blackbox.hpp"
#include "ace/core.hpp"

namespace ace {

struct SamplerConfig {
  Index n_neighbors = 5000;
  // Per-dimension variance of the Gaussian around continuous coordinates.
  double continuous_variance = 0.01;
  // Probability of negating each binary coordinate.
  double flip_probability = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct KernelConfig {
  // Unset means the default width 0.75 * sqrt(M).
  std::optional<double> sigma;

  static double default_sigma(Index dimension);
  double width(Index dimension) const;
};

// Perturbed neighbors of one instance, their black-box scores and kernel weights.
struct NeighborhoodSample {
  MatrixXd neighbors;       // N x M
  VectorXd scores;          // N
  VectorXd kernel_weights;  // N, each in (0, 1]

  Index size() const { return neighbors.rows(); }
  Index dimension() const { return neighbors.cols(); }
  void validate() const;
};

/// exp(-||x - y||^2 / sigma^2).
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar kernel_weight(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y,
                                        typename DerivedX::Scalar sigma) {
  if (x.size() != y.size()) fail(ErrorCode::kInvalidArgument, "kernel_weight: dimension mismatch");
  if (!(sigma > 0)) fail(ErrorCode::kInvalidArgument, "kernel_weight: sigma must be positive");
  return std::exp(-(x - y).squaredNorm() / (sigma * sigma));
}

double kernel_weight(const Instance& x, const VectorXd& neighbor, const KernelConfig& cfg);

// Kernel weight of every row of `neighbors` relative to `center`.
VectorXd kernel_weights(const VectorXd& center, const MatrixXd& neighbors, double sigma);

// Continuous coordinates draw from Normal(x_i, variance); binary coordinates
// are negated independently with the flip probability. Rows are generated in
// order from a single mt19937_64 seeded with cfg.seed.
MatrixXd sample_neighbors(const Instance& x, const SamplerConfig& cfg);

// Samples, scores (batch) and weights the neighborhood. The examined point
// itself is not part of the sample.
NeighborhoodSample build_sample(const Instance& x, const Scorer& scorer, const SamplerConfig& sampler,
                                const KernelConfig& kernel);

}  // namespace ace
