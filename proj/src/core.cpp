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

#include "ace/core.hpp"

#include <set>

namespace ace {

const char* to_string(FeatureKind kind) {
  return kind == FeatureKind::kBinary ? "binary" : "continuous";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "binary") return FeatureKind::kBinary;
  if (text == "continuous") return FeatureKind::kContinuous;
  fail(ErrorCode::kInvalidArgument, "unknown feature kind '" + std::string(text) + "'");
}

FeatureSchema::FeatureSchema(std::vector<Feature> features) : features_(std::move(features)) {
  if (features_.empty()) fail(ErrorCode::kInvalidArgument, "schema needs at least one feature");
  std::set<std::string_view> seen;
  for (const Feature& f : features_) {
    if (f.name.empty()) fail(ErrorCode::kInvalidArgument, "schema: empty feature name");
    if (!seen.insert(f.name).second) {
      fail(ErrorCode::kInvalidArgument, "schema: duplicate feature name '" + f.name + "'");
    }
  }
}

bool FeatureSchema::all_binary() const {
  return std::all_of(features_.begin(), features_.end(),
                     [](const Feature& f) { return f.kind == FeatureKind::kBinary; });
}

std::vector<Index> FeatureSchema::binary_indices() const {
  std::vector<Index> out;
  for (Index i = 0; i < dimension(); ++i) {
    if (is_binary(i)) out.push_back(i);
  }
  return out;
}

std::vector<Index> FeatureSchema::continuous_indices() const {
  std::vector<Index> out;
  for (Index i = 0; i < dimension(); ++i) {
    if (!is_binary(i)) out.push_back(i);
  }
  return out;
}

SchemaPtr make_schema(std::vector<Feature> features) {
  return std::make_shared<const FeatureSchema>(std::move(features));
}

SchemaPtr make_uniform_schema(Index dimension, FeatureKind kind, std::string_view prefix) {
  std::vector<Feature> features;
  features.reserve(static_cast<size_t>(dimension));
  for (Index i = 0; i < dimension; ++i) {
    features.push_back({std::string(prefix) + std::to_string(i), kind});
  }
  return make_schema(std::move(features));
}

Instance::Instance(SchemaPtr schema, VectorXd values) : schema_(std::move(schema)), values_(std::move(values)) {
  if (!schema_) fail(ErrorCode::kInvalidArgument, "instance without schema");
  if (values_.size() != schema_->dimension()) {
    fail(ErrorCode::kInvalidArgument, "instance has " + std::to_string(values_.size()) +
                                          " values, schema expects " + std::to_string(schema_->dimension()));
  }
  for (Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      fail(ErrorCode::kInvalidArgument, "instance value for '" + schema_->feature(i).name + "' is not finite");
    }
    if (schema_->is_binary(i) && values_[i] != 1.0 && values_[i] != -1.0) {
      fail(ErrorCode::kInvalidArgument,
           "binary feature '" + schema_->feature(i).name + "' must be -1 or +1");
    }
  }
}

Instance Dataset::instance(Index row) const {
  if (row < 0 || row >= rows.rows()) {
    fail(ErrorCode::kInvalidArgument, "row " + std::to_string(row) + " out of range");
  }
  return Instance(schema, rows.row(row).transpose());
}

void Dataset::validate() const {
  if (!schema) fail(ErrorCode::kInvalidArgument, "dataset without schema");
  if (rows.cols() != schema->dimension()) fail(ErrorCode::kInvalidArgument, "dataset width does not match schema");
  for (Index r = 0; r < rows.rows(); ++r) instance(r);
}

AnomalyScore::AnomalyScore(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0) {
    fail(ErrorCode::kInvalidArgument, "anomaly score must be finite and non-negative");
  }
}

VectorXd SurrogateModel::augmented() const {
  VectorXd out(weights.size() + 1);
  out << weights, bias;
  return out;
}

SurrogateModel SurrogateModel::from_augmented(const VectorXd& augmented) {
  if (augmented.size() < 2) fail(ErrorCode::kInvalidArgument, "augmented weight vector too short");
  const Index m = augmented.size() - 1;
  return SurrogateModel{augmented.head(m), augmented[m]};
}

const char* to_string(Method method) {
  switch (method) {
    case Method::kAce: return "ACE";
    case Method::kAceKl: return "ACE_KL";
    case Method::kLimeRegression: return "LIME_REG";
    case Method::kReconstruction: return "AE_RECON";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  if (text == "ACE" || text == "ace") return Method::kAce;
  if (text == "ACE_KL" || text == "ace-kl") return Method::kAceKl;
  if (text == "LIME_REG" || text == "lime") return Method::kLimeRegression;
  if (text == "AE_RECON" || text == "ae-recon") return Method::kReconstruction;
  fail(ErrorCode::kInvalidArgument, "unknown method '" + std::string(text) + "'");
}

std::vector<Method> parse_method_list(std::string_view comma_separated) {
  std::vector<Method> out;
  size_t start = 0;
  while (start <= comma_separated.size()) {
    const size_t end = std::min(comma_separated.find(',', start), comma_separated.size());
    const std::string_view token = comma_separated.substr(start, end - start);
    if (!token.empty()) {
      const Method m = parse_method(token);
      if (std::find(out.begin(), out.end(), m) != out.end()) {
        fail(ErrorCode::kInvalidArgument, "method listed twice: " + std::string(token));
      }
      out.push_back(m);
    }
    start = end + 1;
  }
  if (out.empty()) fail(ErrorCode::kInvalidArgument, "no methods requested");
  return out;
}

bool is_distribution(const VectorXd& values, double tolerance) {
  if (values.size() == 0 || !values.allFinite()) return false;
  if ((values.array() < 0.0).any() || (values.array() > 1.0).any()) return false;
  return std::abs(values.sum() - 1.0) <= tolerance;
}

std::vector<Index> rank_descending(const VectorXd& values) {
  std::vector<Index> order(static_cast<size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values[a] > values[b]; });
  return order;
}

Explanation::Explanation(VectorXd contributions, Method method, Index top_k)
    : contributions_(std::move(contributions)), method_(method) {
  if (!is_distribution(contributions_)) {
    fail(ErrorCode::kNumericalFailure, std::string(to_string(method)) +
                                           ": contributions do not form a distribution");
  }
  if (top_k < 1) fail(ErrorCode::kInvalidArgument, "top_k must be positive");
  const std::vector<Index> order = rank_descending(contributions_);
  const Index k = std::min(top_k, contributions_.size());
  ranked_.reserve(static_cast<size_t>(k));
  for (Index r = 0; r < k; ++r) {
    const Index i = order[static_cast<size_t>(r)];
    ranked_.push_back({i, contributions_[i]});
  }
}

std::vector<Index> Explanation::ranking() const { return rank_descending(contributions_); }

AnomalyScore probability_to_score(double probability) {
  if (!(probability >= 0.0 && probability < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "probability_to_score: p must lie in [0, 1)");
  }
  return AnomalyScore(-std::log1p(-probability));
}

}  // namespace ace
