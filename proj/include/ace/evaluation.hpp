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
#include <string_view>
#include <vector>

#include "ace/blackbox.hpp"
#include "ace/core.hpp"
#include "ace/datagen.hpp"
#include "ace/explainers.hpp"

namespace ace {

// Reference contribution distribution for a known (injected) anomaly.
struct GroundTruth {
  VectorXd contributions;
  std::vector<Index> perturbed_indices;

  void validate() const;
};

// How mass is split when several features were perturbed.
enum class GroundTruthPolicy { kUniform, kProportionalExcess };

const char* to_string(GroundTruthPolicy policy);
GroundTruthPolicy parse_ground_truth_policy(std::string_view text);

inline constexpr double kKlQFloor = 1e-12;

/// KL(P || Q) = sum_i P(f_i) ln(P(f_i) / Q(f_i)), with 0 ln 0 = 0 and Q
/// floored at 1e-12. Lower is better.
double kl_metric(const GroundTruth& truth, const Explanation& predicted);

// One-hot for a single perturbed feature; otherwise uniform over the
// perturbed set or proportional to each injected delta.
GroundTruth ground_truth_for_injection(const InjectionRecord& record,
                                       GroundTruthPolicy policy = GroundTruthPolicy::kUniform);

struct RemediationReport {
  double original_score = 0.0;
  double remediated_score_method = 0.0;
  // Mean over the random draws.
  double remediated_score_random = 0.0;
  std::vector<Index> flipped_indices_method;
  std::vector<std::vector<Index>> flipped_indices_random;  // one entry per draw
};

// Arm 1 negates the explanation's top-k features; arm 2 negates k binary
// features chosen uniformly at random (seeded), averaged over `repeats`
// draws. Both arms start from x.
RemediationReport remediate(const Instance& x, const Scorer& scorer, const Explanation& explanation, Index k,
                            std::uint64_t seed, Index repeats = 1);

struct MethodResult {
  Method method;
  Explanation explanation;
  double kl = 0.0;
};

// Explains x with every requested method on a shared neighborhood and scores
// each explanation against the ground truth.
std::vector<MethodResult> compare_methods(const Instance& x, const Scorer& scorer, const GroundTruth& truth,
                                          std::span<const Method> methods, const ExplainConfig& cfg);

}  // namespace ace
