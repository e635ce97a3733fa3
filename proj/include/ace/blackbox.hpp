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

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "ace/core.hpp"

namespace ace {

// Black-box contract f: x -> anomaly score. Implementations provide
// score_row(); score() and batch_score() share it, so a batch entry always
// equals the single-instance score bit for bit.
class Scorer {
 public:
  explicit Scorer(SchemaPtr schema);
  virtual ~Scorer() = default;

  Scorer(const Scorer&) = default;
  Scorer& operator=(const Scorer&) = default;

  const FeatureSchema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const { return schema_; }

  AnomalyScore score(const Instance& x) const;
  // One score per row of `rows` (N x M, values in the schema's encoding).
  VectorXd batch_score(const MatrixXd& rows) const;
  std::vector<AnomalyScore> batch_score(std::span<const Instance> xs) const;

  // Whether score_row may be called from several threads at once.
  virtual bool concurrent_safe() const { return true; }

 protected:
  virtual double score_row(const Eigen::Ref<const VectorXd>& x) const = 0;

 private:
  void check_schema(const FeatureSchema& other) const;

  SchemaPtr schema_;
};

// max(0, w.x + b). Used as a transparent oracle for surrogate recovery.
class LinearScorer final : public Scorer {
 public:
  LinearScorer(SchemaPtr schema, VectorXd weights, double bias);

  const VectorXd& weights() const { return weights_; }
  double bias() const { return bias_; }

 protected:
  double score_row(const Eigen::Ref<const VectorXd>& x) const override;

 private:
  VectorXd weights_;
  double bias_;
};

// Mean squared error between the standardized input and its projection onto
// an r-dimensional principal subspace. Stands in for an autoencoder scorer.
class ReconstructionScorer final : public Scorer {
 public:
  ReconstructionScorer(SchemaPtr schema, MatrixXd basis, VectorXd feature_means, VectorXd feature_stds);

  const MatrixXd& basis() const { return basis_; }
  Index rank() const { return basis_.cols(); }
  const VectorXd& feature_means() const { return means_; }
  const VectorXd& feature_stds() const { return stds_; }

  VectorXd standardize(const Eigen::Ref<const VectorXd>& x) const;
  // Per-feature residual (I - B B^T) z in standardized coordinates.
  VectorXd residual(const Eigen::Ref<const VectorXd>& x) const;

  // The same scorer consuming already-standardized input (zero means, unit stds).
  ReconstructionScorer standardized_view() const;

 protected:
  double score_row(const Eigen::Ref<const VectorXd>& x) const override;

 private:
  MatrixXd basis_;
  VectorXd means_;
  VectorXd stds_;
};

// Independent Bernoulli likelihood over +/-1 features; the score is the
// negative log-likelihood of the instance.
class NaiveBayesScorer final : public Scorer {
 public:
  NaiveBayesScorer(SchemaPtr schema, VectorXd theta, double smoothing = 0.0);

  // P(feature i = +1).
  const VectorXd& theta() const { return theta_; }
  double smoothing() const { return smoothing_; }

  // |ln theta_i - ln(1 - theta_i)|: score change from flipping feature i.
  double flip_delta(Index i) const;

 protected:
  double score_row(const Eigen::Ref<const VectorXd>& x) const override;

 private:
  VectorXd theta_;
  VectorXd log_theta_;
  VectorXd log_complement_;
  double smoothing_;
};

// Stores training means/stds (a zero std becomes 1) and the top-`rank`
// principal directions of the standardized training matrix.
ReconstructionScorer fit_reconstruction_scorer(const Dataset& training, Index rank);

// theta_i = (count(+1) + smoothing) / (n + 2 smoothing).
NaiveBayesScorer fit_naive_bayes(const Dataset& training, double smoothing);

}  // namespace ace
