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

#include "ace/evaluation.hpp"

#include <algorithm>
#include <random>

namespace ace {

void GroundTruth::validate() const {
  if (!is_distribution(contributions)) fail(ErrorCode::kInvalidArgument, "ground truth is not a distribution");
  for (Index i = 0; i < contributions.size(); ++i) {
    const bool listed = std::find(perturbed_indices.begin(), perturbed_indices.end(), i) != perturbed_indices.end();
    if (!listed && contributions[i] != 0.0) {
      fail(ErrorCode::kInvalidArgument, "ground truth puts mass outside the perturbed features");
    }
  }
}

const char* to_string(GroundTruthPolicy policy) {
  return policy == GroundTruthPolicy::kUniform ? "uniform" : "proportional";
}

GroundTruthPolicy parse_ground_truth_policy(std::string_view text) {
  if (text == "uniform") return GroundTruthPolicy::kUniform;
  if (text == "proportional") return GroundTruthPolicy::kProportionalExcess;
  fail(ErrorCode::kInvalidArgument, "unknown ground-truth policy '" + std::string(text) + "'");
}

double kl_metric(const GroundTruth& truth, const Explanation& predicted) {
  if (!is_distribution(truth.contributions)) fail(ErrorCode::kInvalidArgument, "kl_metric: truth is not a distribution");
  if (truth.contributions.size() != predicted.dimension()) fail(ErrorCode::kInvalidArgument, "kl_metric: dimension mismatch");
  return kl_divergence(truth.contributions, predicted.contributions(), kKlQFloor);
}

GroundTruth ground_truth_for_injection(const InjectionRecord& record, GroundTruthPolicy policy) {
  const auto& indices = record.perturbed_indices;
  if (indices.empty()) fail(ErrorCode::kInvalidArgument, "ground truth needs at least one perturbed feature");
  if (record.injected_deltas.size() != static_cast<Index>(indices.size())) {
    fail(ErrorCode::kInvalidArgument, "injection record: one delta per perturbed index expected");
  }
  GroundTruth truth;
  truth.perturbed_indices = indices;
  truth.contributions = VectorXd::Zero(record.base.size());
  VectorXd mass = policy == GroundTruthPolicy::kProportionalExcess ? VectorXd(record.injected_deltas.cwiseAbs())
                                                                   : VectorXd::Ones(record.injected_deltas.size());
  if (!(mass.sum() > 0.0)) fail(ErrorCode::kInvalidArgument, "injected deltas are all zero");
  mass /= mass.sum();
  for (size_t k = 0; k < indices.size(); ++k) {
    const Index i = indices[k];
    if (i < 0 || i >= truth.contributions.size()) fail(ErrorCode::kInvalidArgument, "perturbed index out of range");
    truth.contributions[i] = mass[static_cast<Index>(k)];
  }
  truth.validate();
  return truth;
}

namespace {

double score_with_flips(const Instance& x, const Scorer& scorer, const std::vector<Index>& flips) {
  VectorXd values = x.values();
  for (Index i : flips) values[i] = -values[i];
  return scorer.score(x.with_values(std::move(values))).value();
}

}  // namespace

RemediationReport remediate(const Instance& x, const Scorer& scorer, const Explanation& explanation, Index k,
                            std::uint64_t seed, Index repeats) {
  if (explanation.dimension() != x.dimension()) fail(ErrorCode::kInvalidArgument, "explanation dimension mismatch");
  if (k < 0) fail(ErrorCode::kInvalidArgument, "k must be non-negative");
  if (repeats < 1) fail(ErrorCode::kInvalidArgument, "repeats must be positive");
  const std::vector<Index> binary = x.schema().binary_indices();
  if (k > static_cast<Index>(binary.size())) {
    fail(ErrorCode::kInvalidArgument, "k exceeds the number of binary features");
  }

  RemediationReport report;
  report.original_score = scorer.score(x).value();

  const std::vector<Index> ranking = explanation.ranking();
  report.flipped_indices_method.assign(ranking.begin(), ranking.begin() + k);
  for (Index i : report.flipped_indices_method) {
    if (!x.schema().is_binary(i)) {
      fail(ErrorCode::kInvalidArgument, "cannot flip continuous feature '" + x.schema().feature(i).name + "'");
    }
  }
  std::sort(report.flipped_indices_method.begin(), report.flipped_indices_method.end());
  report.remediated_score_method = score_with_flips(x, scorer, report.flipped_indices_method);

  std::mt19937_64 rng(seed);
  double total = 0.0;
  for (Index r = 0; r < repeats; ++r) {
    std::vector<Index> draw;
    if (k > 0) {
      for (Index pos : choose_indices(static_cast<Index>(binary.size()), k, rng)) {
        draw.push_back(binary[static_cast<size_t>(pos)]);
      }
    }
    total += score_with_flips(x, scorer, draw);
    report.flipped_indices_random.push_back(std::move(draw));
  }
  report.remediated_score_random = total / static_cast<double>(repeats);
  return report;
}

std::vector<MethodResult> compare_methods(const Instance& x, const Scorer& scorer, const GroundTruth& truth,
                                          std::span<const Method> methods, const ExplainConfig& cfg) {
  truth.validate();
  if (truth.contributions.size() != x.dimension()) fail(ErrorCode::kInvalidArgument, "truth dimension mismatch");
  std::vector<Explanation> explanations = explain_methods(x, scorer, methods, cfg);
  std::vector<MethodResult> out;
  out.reserve(explanations.size());
  for (Explanation& e : explanations) {
    const double kl = kl_metric(truth, e);
    out.push_back(MethodResult{e.method(), std::move(e), kl});
  }
  return out;
}

}  // namespace ace
