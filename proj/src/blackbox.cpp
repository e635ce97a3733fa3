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

#include "ace/blackbox.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace ace {

Scorer::Scorer(SchemaPtr schema) : schema_(std::move(schema)) {
  if (!schema_) fail(ErrorCode::kInvalidArgument, "scorer without schema");
}

void Scorer::check_schema(const FeatureSchema& other) const {
  if (!(other == *schema_)) fail(ErrorCode::kInvalidArgument, "instance schema does not match scorer schema");
}

AnomalyScore Scorer::score(const Instance& x) const {
  check_schema(x.schema());
  return AnomalyScore(score_row(x.values()));
}

VectorXd Scorer::batch_score(const MatrixXd& rows) const {
  if (rows.cols() != schema_->dimension()) {
    fail(ErrorCode::kInvalidArgument, "batch has " + std::to_string(rows.cols()) + " columns, scorer expects " +
                                          std::to_string(schema_->dimension()));
  }
  VectorXd out(rows.rows());
  for (Index r = 0; r < rows.rows(); ++r) {
    const VectorXd row = rows.row(r).transpose();
    out[r] = AnomalyScore(score_row(row)).value();
  }
  return out;
}

std::vector<AnomalyScore> Scorer::batch_score(std::span<const Instance> xs) const {
  std::vector<AnomalyScore> out;
  out.reserve(xs.size());
  for (const Instance& x : xs) out.push_back(score(x));
  return out;
}

LinearScorer::LinearScorer(SchemaPtr schema, VectorXd weights, double bias)
    : Scorer(std::move(schema)), weights_(std::move(weights)), bias_(bias) {
  if (weights_.size() != this->schema().dimension()) fail(ErrorCode::kInvalidArgument, "linear scorer: weight size");
  if (!weights_.allFinite() || !std::isfinite(bias_)) fail(ErrorCode::kInvalidArgument, "linear scorer: non-finite");
}

double LinearScorer::score_row(const Eigen::Ref<const VectorXd>& x) const {
  return std::max(0.0, weights_.dot(x) + bias_);
}

ReconstructionScorer::ReconstructionScorer(SchemaPtr schema, MatrixXd basis, VectorXd feature_means,
                                           VectorXd feature_stds)
    : Scorer(std::move(schema)), basis_(std::move(basis)), means_(std::move(feature_means)),
      stds_(std::move(feature_stds)) {
  const Index m = this->schema().dimension();
  if (basis_.rows() != m || means_.size() != m || stds_.size() != m) {
    fail(ErrorCode::kInvalidArgument, "reconstruction scorer: parameter sizes do not match schema");
  }
  if (basis_.cols() < 1 || basis_.cols() >= m) {
    fail(ErrorCode::kInvalidArgument, "reconstruction scorer: rank must satisfy 0 < r < M");
  }
  if (!basis_.allFinite() || !means_.allFinite() || !stds_.allFinite() || (stds_.array() <= 0.0).any()) {
    fail(ErrorCode::kInvalidArgument, "reconstruction scorer: non-finite parameters or non-positive std");
  }
  const MatrixXd gram = basis_.transpose() * basis_;
  if ((gram - MatrixXd::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff() > 1e-8) {
    fail(ErrorCode::kInvalidArgument, "reconstruction scorer: basis columns are not orthonormal");
  }
}

VectorXd ReconstructionScorer::standardize(const Eigen::Ref<const VectorXd>& x) const {
  return (x - means_).cwiseQuotient(stds_);
}

VectorXd ReconstructionScorer::residual(const Eigen::Ref<const VectorXd>& x) const {
  const VectorXd z = standardize(x);
  return z - basis_ * (basis_.transpose() * z);
}

double ReconstructionScorer::score_row(const Eigen::Ref<const VectorXd>& x) const {
  return residual(x).squaredNorm() / static_cast<double>(x.size());
}

ReconstructionScorer ReconstructionScorer::standardized_view() const {
  const Index m = schema().dimension();
  return ReconstructionScorer(schema_ptr(), basis_, VectorXd::Zero(m), VectorXd::Ones(m));
}

NaiveBayesScorer::NaiveBayesScorer(SchemaPtr schema, VectorXd theta, double smoothing)
    : Scorer(std::move(schema)), theta_(std::move(theta)), smoothing_(smoothing) {
  if (!this->schema().all_binary()) {
    fail(ErrorCode::kInvalidArgument, "naive Bayes scorer requires an all-binary schema");
  }
  if (theta_.size() != this->schema().dimension()) fail(ErrorCode::kInvalidArgument, "naive Bayes: theta size");
  if (!theta_.allFinite() || (theta_.array() <= 0.0).any() || (theta_.array() >= 1.0).any()) {
    fail(ErrorCode::kInvalidArgument, "naive Bayes: every theta must lie in (0, 1)");
  }
  log_theta_ = theta_.array().log();
  log_complement_ = (1.0 - theta_.array()).log();
}

double NaiveBayesScorer::flip_delta(Index i) const { return std::abs(log_theta_[i] - log_complement_[i]); }

double NaiveBayesScorer::score_row(const Eigen::Ref<const VectorXd>& x) const {
  double nll = 0.0;
  for (Index i = 0; i < x.size(); ++i) nll -= x[i] > 0.0 ? log_theta_[i] : log_complement_[i];
  return nll;
}

ReconstructionScorer fit_reconstruction_scorer(const Dataset& training, Index rank) {
  training.validate();
  const Index m = training.dimension();
  const Index n = training.size();
  if (rank < 1 || rank >= m) fail(ErrorCode::kInvalidArgument, "rank must satisfy 0 < r < M");
  if (!training.schema->binary_indices().empty()) {
    fail(ErrorCode::kInvalidArgument, "reconstruction scorer requires continuous features");
  }
  if (n < 2) fail(ErrorCode::kInsufficientData, "reconstruction scorer needs at least 2 training rows");

  const VectorXd means = training.rows.colwise().mean().transpose();
  const MatrixXd centered = training.rows.rowwise() - means.transpose();
  VectorXd stds = (centered.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt().transpose();
  for (Index i = 0; i < m; ++i) {
    if (!(stds[i] > 0.0)) stds[i] = 1.0;
  }
  const MatrixXd standardized = centered * stds.cwiseInverse().asDiagonal();
  const MatrixXd covariance = standardized.transpose() * standardized / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) fail(ErrorCode::kNumericalFailure, "eigendecomposition failed");
  // Eigenvalues ascend; keep the last `rank` columns, largest first.
  MatrixXd basis = solver.eigenvectors().rightCols(rank).rowwise().reverse();
  for (Index c = 0; c < rank; ++c) {
    Index pivot = 0;
    basis.col(c).cwiseAbs().maxCoeff(&pivot);
    if (basis(pivot, c) < 0.0) basis.col(c) *= -1.0;
  }
  return ReconstructionScorer(training.schema, std::move(basis), means, stds);
}

NaiveBayesScorer fit_naive_bayes(const Dataset& training, double smoothing) {
  if (!training.schema || !training.schema->all_binary()) {
    fail(ErrorCode::kInvalidArgument, "naive Bayes requires every feature to be binary");
  }
  training.validate();
  if (training.size() < 1) fail(ErrorCode::kInsufficientData, "naive Bayes needs at least one training row");
  if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) fail(ErrorCode::kInvalidArgument, "smoothing must be >= 0");
  const double n = static_cast<double>(training.size());
  const VectorXd positives = (training.rows.array() > 0.0).cast<double>().colwise().sum().transpose();
  VectorXd theta = (positives.array() + smoothing) / (n + 2.0 * smoothing);
  return NaiveBayesScorer(training.schema, std::move(theta), smoothing);
}

}  // namespace ace
