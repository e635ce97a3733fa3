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

#include "ace/blackbox.hpp"
#include "ace/core.hpp"
#include "ace/neighborhood.hpp"

#include <span>
#include <vector>

namespace ace {

struct AceConfig {
  double alpha = 1.0;
  Index top_k = 10;

  void validate() const;
};

struct AceKlConfig {
  double alpha = 1.0;
  double beta = 50.0;
  Index max_iterations = 2000;
  // Initial trial step along the preconditioned descent direction.
  double step_size = 1.0;
  double gradient_tolerance = 1e-6;
  Index top_k = 10;

  void validate() const;
  AceConfig ridge() const { return AceConfig{alpha, top_k}; }
};

// The reference distribution P of the KL regularizer: 1/M on every feature.
struct UniformReference {
  Index dimension = 1;

  double mass() const { return 1.0 / static_cast<double>(dimension); }
  VectorXd distribution() const { return VectorXd::Constant(dimension, mass()); }
};

/// Kernel-weighted ridge loss of the surrogate on the sample:
///   sum_j pi_j (w~ . x~_j - As_j)^2 + alpha ||w~||^2
/// where x~_j is the neighbor with a constant 1 appended and w~ = [w; b].
double ace_loss(const SurrogateModel& model, const NeighborhoodSample& sample, double alpha);

// Closed-form minimizer of ace_loss via the weighted ridge normal equations.
// The bias coordinate is regularized together with the feature weights.
SurrogateModel fit_ace(const NeighborhoodSample& sample, const AceConfig& cfg);

// Contribution distribution of the surrogate at x (products x_i * w_i).
Explanation explain_surrogate(const Instance& x, const SurrogateModel& model, Index top_k, Method method);
Explanation explain_ace(const Instance& x, const SurrogateModel& model, const AceConfig& cfg);

/// KL(U || Q) where Q = contributions(x_i * w_i) and U is uniform.
double ace_kl_regularizer(const SurrogateModel& model, const Instance& x);

/// ace_loss - beta * KL(U || Q). The KL term depends only on (w, x) and is
/// evaluated once at the examined point.
double ace_kl_loss(const SurrogateModel& model, const NeighborhoodSample& sample, const Instance& x,
                   const AceKlConfig& cfg);

/// Gradient of ace_kl_loss with respect to [w; b].
VectorXd ace_kl_gradient(const SurrogateModel& model, const NeighborhoodSample& sample, const Instance& x,
                         const AceKlConfig& cfg);

struct AceKlFit {
  SurrogateModel model;
  double loss = 0.0;
  double gradient_norm = 0.0;
  Index iterations = 0;
  bool converged = false;
};

// Descends ace_kl_loss from the closed-form ACE solution. Directions are the
// gradient preconditioned by the ridge Hessian; steps are halved until the
// Armijo condition holds. Stops at gradient_tolerance or max_iterations and
// returns the lowest-loss iterate.
AceKlFit optimize_ace_kl(const NeighborhoodSample& sample, const Instance& x, const AceKlConfig& cfg);
SurrogateModel fit_ace_kl(const NeighborhoodSample& sample, const Instance& x, const AceKlConfig& cfg);

// LIME's importance semantics for a regression surrogate: |w_i| / sum_j |w_j|.
Explanation lime_attribution(const SurrogateModel& model, Index top_k);
Explanation explain_lime_regression(const Instance& x, const NeighborhoodSample& sample, const AceConfig& cfg);

// Squared standardized reconstruction residual per feature, normalized.
Explanation explain_reconstruction_baseline(const Instance& x, const ReconstructionScorer& scorer,
                                            const AceConfig& cfg);

struct ExplainConfig {
  SamplerConfig sampler;
  KernelConfig kernel;
  AceConfig ace;
  AceKlConfig ace_kl;
};

// One explanation per requested method, in request order. ACE, ACE_KL and
// LIME_REG share a single neighborhood sample (and ACE/LIME_REG one fit).
// AE_RECON requires `scorer` to be a ReconstructionScorer.
std::vector<Explanation> explain_methods(const Instance& x, const Scorer& scorer, std::span<const Method> methods,
                                         const ExplainConfig& cfg);

}  // namespace ace
