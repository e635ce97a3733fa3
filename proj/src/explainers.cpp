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

#include "ace/explainers.hpp"

#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

namespace ace {
namespace {

// Below this the log-softplus and sigmoid/softplus ratio switch to their
// asymptotic forms to keep ln(softplus(p)) finite.
constexpr double kLogSoftplusCutoff = -30.0;

double log_softplus(double p) {
  if (p < kLogSoftplusCutoff) return p + std::log1p(-0.5 * std::exp(p));
  return std::log(softplus(p));
}

// sigmoid(p) / softplus(p)
double sigmoid_over_softplus(double p) {
  if (p < kLogSoftplusCutoff) return 1.0 - 0.5 * std::exp(p);
  return sigmoid(p) / softplus(p);
}

MatrixXd augmented_design(const MatrixXd& neighbors) {
  MatrixXd design(neighbors.rows(), neighbors.cols() + 1);
  design << neighbors, VectorXd::Ones(neighbors.rows());
  return design;
}

void check_model(const SurrogateModel& model, Index dimension) {
  if (model.dimension() != dimension) fail(ErrorCode::kInvalidArgument, "surrogate dimension mismatch");
}

// Weighted ridge normal equations (X~^T Pi X~ + alpha I) w~ = X~^T Pi y.
struct RidgeSystem {
  MatrixXd design;
  VectorXd weighted_targets;
  MatrixXd normal_matrix;
  Eigen::LDLT<MatrixXd> factor;

  RidgeSystem(const NeighborhoodSample& sample, double alpha) : design(augmented_design(sample.neighbors)) {
    const MatrixXd weighted = sample.kernel_weights.asDiagonal() * design;
    normal_matrix = design.transpose() * weighted;
    normal_matrix.diagonal().array() += alpha;
    weighted_targets = weighted.transpose() * sample.scores;
    factor.compute(normal_matrix);
    if (factor.info() != Eigen::Success || !factor.isPositive() || !(factor.rcond() > 1e-14)) {
      fail(ErrorCode::kNumericalFailure, "weighted ridge system is singular; increase alpha or the sample size");
    }
  }

  VectorXd solve() const {
    VectorXd w = factor.solve(weighted_targets);
    if (!w.allFinite()) fail(ErrorCode::kNumericalFailure, "weighted ridge solution is not finite");
    return w;
  }
};

double ridge_loss(const VectorXd& w, const MatrixXd& design, const NeighborhoodSample& sample, double alpha) {
  const VectorXd residual = design * w - sample.scores;
  return sample.kernel_weights.dot(residual.cwiseAbs2()) + alpha * w.squaredNorm();
}

VectorXd ridge_gradient(const VectorXd& w, const MatrixXd& design, const NeighborhoodSample& sample, double alpha) {
  const VectorXd residual = design * w - sample.scores;
  return 2.0 * design.transpose() * sample.kernel_weights.cwiseProduct(residual) + 2.0 * alpha * w;
}

double kl_regularizer(const VectorXd& products) {
  const Index m = products.size();
  double total = 0.0;
  double mean_log = 0.0;
  for (Index i = 0; i < m; ++i) {
    total += softplus(products[i]);
    mean_log += log_softplus(products[i]);
  }
  mean_log /= static_cast<double>(m);
  // KL(U||Q) = sum_i (1/M) ln((1/M) / (s_i / S)) = -ln M - mean_i ln s_i + ln S
  return -std::log(static_cast<double>(m)) - mean_log + std::log(total);
}

VectorXd kl_regularizer_gradient(const VectorXd& products, const VectorXd& x) {
  const Index m = products.size();
  double total = 0.0;
  for (Index i = 0; i < m; ++i) total += softplus(products[i]);
  VectorXd g(m);
  for (Index i = 0; i < m; ++i) {
    const double p = products[i];
    g[i] = x[i] * (sigmoid(p) / total - sigmoid_over_softplus(p) / static_cast<double>(m));
  }
  return g;
}

struct KlObjective {
  const NeighborhoodSample& sample;
  const VectorXd& x;
  const AceKlConfig& cfg;
  const MatrixXd& design;

  double loss(const VectorXd& w) const {
    const Index m = x.size();
    const VectorXd products = x.cwiseProduct(w.head(m));
    return ridge_loss(w, design, sample, cfg.alpha) - cfg.beta * kl_regularizer(products);
  }

  VectorXd gradient(const VectorXd& w) const {
    const Index m = x.size();
    VectorXd g = ridge_gradient(w, design, sample, cfg.alpha);
    if (cfg.beta != 0.0) g.head(m) -= cfg.beta * kl_regularizer_gradient(x.cwiseProduct(w.head(m)), x);
    return g;
  }
};

void check_sample_against(const NeighborhoodSample& sample, const Instance& x) {
  sample.validate();
  if (sample.dimension() != x.dimension()) fail(ErrorCode::kInvalidArgument, "sample and instance dimensions differ");
}

}  // namespace

void AceConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail(ErrorCode::kInvalidArgument, "alpha must be >= 0");
  if (top_k < 1) fail(ErrorCode::kInvalidArgument, "top_k must be positive");
}

void AceKlConfig::validate() const {
  ridge().validate();
  if (!(beta >= 0.0) || !std::isfinite(beta)) fail(ErrorCode::kInvalidArgument, "beta must be >= 0");
  if (max_iterations < 1) fail(ErrorCode::kInvalidArgument, "max_iterations must be positive");
  if (!(step_size > 0.0)) fail(ErrorCode::kInvalidArgument, "step_size must be positive");
  if (!(gradient_tolerance > 0.0)) fail(ErrorCode::kInvalidArgument, "gradient_tolerance must be positive");
}

double ace_loss(const SurrogateModel& model, const NeighborhoodSample& sample, double alpha) {
  sample.validate();
  check_model(model, sample.dimension());
  return ridge_loss(model.augmented(), augmented_design(sample.neighbors), sample, alpha);
}

SurrogateModel fit_ace(const NeighborhoodSample& sample, const AceConfig& cfg) {
  cfg.validate();
  sample.validate();
  if (sample.size() < sample.dimension() + 1) {
    std::clog << "warning: " << sample.size() << " neighbors for " << sample.dimension()
              << " features; the surrogate is under-determined without regularization\n";
  }
  return SurrogateModel::from_augmented(RidgeSystem(sample, cfg.alpha).solve());
}

Explanation explain_surrogate(const Instance& x, const SurrogateModel& model, Index top_k, Method method) {
  check_model(model, x.dimension());
  const VectorXd products = x.values().cwiseProduct(model.weights);
  return Explanation(contributions(products), method, top_k);
}

Explanation explain_ace(const Instance& x, const SurrogateModel& model, const AceConfig& cfg) {
  cfg.validate();
  return explain_surrogate(x, model, cfg.top_k, Method::kAce);
}

double ace_kl_regularizer(const SurrogateModel& model, const Instance& x) {
  check_model(model, x.dimension());
  return kl_regularizer(x.values().cwiseProduct(model.weights));
}

double ace_kl_loss(const SurrogateModel& model, const NeighborhoodSample& sample, const Instance& x,
                   const AceKlConfig& cfg) {
  check_sample_against(sample, x);
  check_model(model, x.dimension());
  const MatrixXd design = augmented_design(sample.neighbors);
  const double loss = KlObjective{sample, x.values(), cfg, design}.loss(model.augmented());
  if (!std::isfinite(loss)) fail(ErrorCode::kNumericalFailure, "ACE-KL loss is not finite");
  return loss;
}

VectorXd ace_kl_gradient(const SurrogateModel& model, const NeighborhoodSample& sample, const Instance& x,
                         const AceKlConfig& cfg) {
  check_sample_against(sample, x);
  check_model(model, x.dimension());
  const MatrixXd design = augmented_design(sample.neighbors);
  return KlObjective{sample, x.values(), cfg, design}.gradient(model.augmented());
}

AceKlFit optimize_ace_kl(const NeighborhoodSample& sample, const Instance& x, const AceKlConfig& cfg) {
  cfg.validate();
  check_sample_against(sample, x);
  const RidgeSystem ridge(sample, cfg.alpha);
  const KlObjective objective{sample, x.values(), cfg, ridge.design};

  VectorXd w = ridge.solve();
  double loss = objective.loss(w);
  VectorXd g = objective.gradient(w);

  auto diverged = [&](const char* what, Index iteration) {
    std::ostringstream msg;
    msg << "ACE-KL diverged (" << what << ") at iteration " << iteration << ": loss=" << loss
        << " |grad|=" << g.norm();
    fail(ErrorCode::kNumericalFailure, msg.str());
  };
  if (!std::isfinite(loss) || !g.allFinite()) diverged("initial point", 0);

  AceKlFit fit;
  Index iteration = 0;
  for (; iteration < cfg.max_iterations; ++iteration) {
    if (g.norm() < cfg.gradient_tolerance) {
      fit.converged = true;
      break;
    }
    // The ridge Hessian is 2 * normal_matrix.
    const VectorXd direction = 0.5 * ridge.factor.solve(g);
    const double slope = g.dot(direction);
    double step = cfg.step_size;
    VectorXd candidate;
    double candidate_loss = std::numeric_limits<double>::infinity();
    while (step > 1e-16) {
      candidate = w - step * direction;
      candidate_loss = objective.loss(candidate);
      if (std::isfinite(candidate_loss) && candidate_loss <= loss - 1e-4 * step * slope) break;
      step *= 0.5;
    }
    if (!(step > 1e-16)) break;  // no descent left at machine precision
    w = std::move(candidate);
    loss = candidate_loss;
    g = objective.gradient(w);
    if (!g.allFinite()) diverged("non-finite gradient", iteration + 1);
  }
  if (!fit.converged && g.norm() < cfg.gradient_tolerance) fit.converged = true;

  fit.model = SurrogateModel::from_augmented(w);
  fit.loss = loss;
  fit.gradient_norm = g.norm();
  fit.iterations = iteration;
  return fit;
}

SurrogateModel fit_ace_kl(const NeighborhoodSample& sample, const Instance& x, const AceKlConfig& cfg) {
  return optimize_ace_kl(sample, x, cfg).model;
}

Explanation lime_attribution(const SurrogateModel& model, Index top_k) {
  const VectorXd magnitude = model.weights.cwiseAbs();
  const double total = magnitude.sum();
  if (!(total > kDegenerateDenominator)) {
    fail(ErrorCode::kDegenerateExplanation, "LIME_REG: every surrogate weight is zero");
  }
  return Explanation(magnitude / total, Method::kLimeRegression, top_k);
}

Explanation explain_lime_regression(const Instance& x, const NeighborhoodSample& sample, const AceConfig& cfg) {
  check_sample_against(sample, x);
  return lime_attribution(fit_ace(sample, cfg), cfg.top_k);
}

Explanation explain_reconstruction_baseline(const Instance& x, const ReconstructionScorer& scorer,
                                            const AceConfig& cfg) {
  cfg.validate();
  if (!(x.schema() == scorer.schema())) fail(ErrorCode::kInvalidArgument, "scorer schema does not match instance");
  const VectorXd squared = scorer.residual(x.values()).cwiseAbs2();
  const double total = squared.sum();
  const double scale = std::max(1.0, scorer.standardize(x.values()).squaredNorm());
  if (!(total > 1e-24 * scale)) {
    fail(ErrorCode::kDegenerateExplanation, "AE_RECON: instance is reconstructed exactly");
  }
  return Explanation(squared / total, Method::kReconstruction, cfg.top_k);
}

std::vector<Explanation> explain_methods(const Instance& x, const Scorer& scorer, std::span<const Method> methods,
                                         const ExplainConfig& cfg) {
  const auto* reconstruction = dynamic_cast<const ReconstructionScorer*>(&scorer);
  bool needs_sample = false;
  for (Method m : methods) {
    if (m == Method::kReconstruction && reconstruction == nullptr) {
      fail(ErrorCode::kInvalidArgument, "AE_RECON needs a reconstruction scorer");
    }
    needs_sample = needs_sample || m != Method::kReconstruction;
  }
  cfg.ace.validate();
  cfg.ace_kl.validate();

  std::optional<NeighborhoodSample> sample;
  std::optional<SurrogateModel> ace_model;
  if (needs_sample) sample = build_sample(x, scorer, cfg.sampler, cfg.kernel);
  auto ace_fit = [&]() -> const SurrogateModel& {
    if (!ace_model) ace_model = fit_ace(*sample, cfg.ace);
    return *ace_model;
  };

  std::vector<Explanation> out;
  out.reserve(methods.size());
  for (Method m : methods) {
    switch (m) {
      case Method::kAce:
        out.push_back(explain_ace(x, ace_fit(), cfg.ace));
        break;
      case Method::kAceKl:
        out.push_back(explain_surrogate(x, fit_ace_kl(*sample, x, cfg.ace_kl), cfg.ace_kl.top_k, Method::kAceKl));
        break;
      case Method::kLimeRegression:
        out.push_back(lime_attribution(ace_fit(), cfg.ace.top_k));
        break;
      case Method::kReconstruction:
        out.push_back(explain_reconstruction_baseline(x, *reconstruction, cfg.ace));
        break;
    }
  }
  return out;
}

}  // namespace ace
