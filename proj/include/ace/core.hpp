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
#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ace/error.hpp"

namespace ace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class FeatureKind { kContinuous, kBinary };

const char* to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view text);

struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::kContinuous;

  bool operator==(const Feature&) const = default;
};

// Ordered, named feature layout shared by every instance of a dataset.
// Names are unique and non-empty; the dimension is the feature count.
class FeatureSchema {
 public:
  explicit FeatureSchema(std::vector<Feature> features);

  Index dimension() const { return static_cast<Index>(features_.size()); }
  const Feature& feature(Index i) const { return features_.at(static_cast<size_t>(i)); }
  std::span<const Feature> features() const { return features_; }

  bool is_binary(Index i) const { return feature(i).kind == FeatureKind::kBinary; }
  bool all_binary() const;
  std::vector<Index> binary_indices() const;
  std::vector<Index> continuous_indices() const;

  bool operator==(const FeatureSchema& other) const { return features_ == other.features_; }

 private:
  std::vector<Feature> features_;
};

using SchemaPtr = std::shared_ptr<const FeatureSchema>;

SchemaPtr make_schema(std::vector<Feature> features);
// Names "f0".."f{m-1}", all of one kind.
SchemaPtr make_uniform_schema(Index dimension, FeatureKind kind, std::string_view prefix = "f");

// A feature vector bound to its schema. Binary coordinates hold exactly -1 or +1.
class Instance {
 public:
  Instance(SchemaPtr schema, VectorXd values);

  const VectorXd& values() const { return values_; }
  const FeatureSchema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const { return schema_; }
  Index dimension() const { return values_.size(); }
  double operator[](Index i) const { return values_[i]; }

  // Same schema, new values; revalidated.
  Instance with_values(VectorXd values) const { return Instance(schema_, std::move(values)); }

 private:
  SchemaPtr schema_;
  VectorXd values_;
};

// Row-major table of instances sharing one schema.
struct Dataset {
  SchemaPtr schema;
  MatrixXd rows;

  Index size() const { return rows.rows(); }
  Index dimension() const { return rows.cols(); }
  Instance instance(Index row) const;
  // Throws unless every row is a valid Instance of `schema`.
  void validate() const;
};

class AnomalyScore {
 public:
  explicit AnomalyScore(double value);

  double value() const { return value_; }
  auto operator<=>(const AnomalyScore&) const = default;

 private:
  double value_;
};

// Local linear fit: score ~ weights . x + bias.
struct SurrogateModel {
  VectorXd weights;
  double bias = 0.0;

  Index dimension() const { return weights.size(); }
  // [weights; bias]
  VectorXd augmented() const;
  static SurrogateModel from_augmented(const VectorXd& augmented);
  bool all_finite() const { return weights.allFinite() && std::isfinite(bias); }
};

enum class Method { kAce, kAceKl, kLimeRegression, kReconstruction };

// "ACE", "ACE_KL", "LIME_REG", "AE_RECON".
const char* to_string(Method method);
// Accepts the canonical tags and the lower-case CLI spellings ace, ace-kl, lime, ae-recon.
Method parse_method(std::string_view text);
std::vector<Method> parse_method_list(std::string_view comma_separated);

struct RankedFeature {
  Index index = 0;
  double contribution = 0.0;
};

// Per-feature contribution distribution plus its top-K ranking.
class Explanation {
 public:
  // Validates that `contributions` lies in [0,1] and sums to 1 within 1e-9.
  Explanation(VectorXd contributions, Method method, Index top_k);

  const VectorXd& contributions() const { return contributions_; }
  const std::vector<RankedFeature>& ranked_top_k() const { return ranked_; }
  Method method() const { return method_; }
  Index dimension() const { return contributions_.size(); }

  // All feature indices, most contributing first.
  std::vector<Index> ranking() const;

 private:
  VectorXd contributions_;
  std::vector<RankedFeature> ranked_;
  Method method_;
};

constexpr double kDistributionTolerance = 1e-9;
constexpr double kDegenerateDenominator = 1e-300;

/// ln(1 + e^z) in the overflow-safe form max(z, 0) + ln(1 + e^-|z|).
template <typename Scalar>
Scalar softplus(Scalar z) {
  using std::abs;
  using std::exp;
  using std::log1p;
  using std::max;
  if (!std::isfinite(z)) fail(ErrorCode::kInvalidArgument, "softplus: non-finite input");
  return max(z, Scalar(0)) + log1p(exp(-abs(z)));
}

/// Logistic sigmoid, the derivative of softplus.
template <typename Scalar>
Scalar sigmoid(Scalar z) {
  using std::exp;
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-z));
  const Scalar e = exp(z);
  return e / (Scalar(1) + e);
}

/// Normalized contribution of each feature: softplus(p_i) / sum_j softplus(p_j),
/// where p_i = x^i * w^i is the surrogate product for feature i.
template <typename Derived>
Vector<typename Derived::Scalar> contributions(const Eigen::MatrixBase<Derived>& products) {
  using Scalar = typename Derived::Scalar;
  if (products.size() < 1) fail(ErrorCode::kInvalidArgument, "contributions: empty product vector");
  Vector<Scalar> mass(products.size());
  for (Index i = 0; i < products.size(); ++i) mass[i] = softplus(products.derived().coeff(i));
  const Scalar total = mass.sum();
  if (!(total >= Scalar(kDegenerateDenominator))) {
    fail(ErrorCode::kDegenerateExplanation, "contributions: softplus mass vanishes for every feature");
  }
  return mass / total;
}

/// Shannon entropy in nats, with 0 ln 0 = 0.
template <typename Derived>
typename Derived::Scalar shannon_entropy(const Eigen::MatrixBase<Derived>& distribution) {
  using Scalar = typename Derived::Scalar;
  Scalar h(0);
  for (Index i = 0; i < distribution.size(); ++i) {
    const Scalar p = distribution.derived().coeff(i);
    if (p > Scalar(0)) h -= p * std::log(p);
  }
  return h;
}

/// sum_i P(i) ln(P(i) / max(Q(i), q_floor)), skipping terms with P(i) = 0.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar kl_divergence(const Eigen::MatrixBase<DerivedP>& p,
                                        const Eigen::MatrixBase<DerivedQ>& q,
                                        typename DerivedP::Scalar q_floor = 0) {
  using Scalar = typename DerivedP::Scalar;
  if (p.size() != q.size()) fail(ErrorCode::kInvalidArgument, "kl_divergence: dimension mismatch");
  Scalar total(0);
  for (Index i = 0; i < p.size(); ++i) {
    const Scalar pi = p.derived().coeff(i);
    if (pi <= Scalar(0)) continue;
    const Scalar qi = std::max<Scalar>(q.derived().coeff(i), q_floor);
    total += pi * std::log(pi / qi);
  }
  return total;
}

// True when every entry is in [0, 1] and the entries sum to 1 within `tolerance`.
bool is_distribution(const VectorXd& values, double tolerance = kDistributionTolerance);

// Indices sorted by value, descending; ties keep the lower index first.
std::vector<Index> rank_descending(const VectorXd& values);

/// -ln(1 - p): maps an anomaly probability in [0, 1) onto a non-negative score.
AnomalyScore probability_to_score(double probability);

}  // namespace ace
