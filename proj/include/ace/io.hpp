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

#include <iosfwd>
#include <json.hpp>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ace/blackbox.hpp"
#include "ace/core.hpp"
#include "ace/datagen.hpp"
#include "ace/evaluation.hpp"

namespace ace::io {

using nlohmann::json;

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

// CSV dataset: header of feature names, optional second row of kinds
// (continuous|binary), then numeric rows. A leading column named "id" holds
// opaque row identifiers and is not a feature. Binary columns given as 0/1
// are recoded to -1/+1 with a notice on std::clog.
struct DatasetFile {
  Dataset dataset;
  std::vector<std::string> row_ids;  // empty when the file has no id column

  std::string row_id(Index row) const;
};

DatasetFile read_dataset(std::istream& in);
DatasetFile read_dataset_file(const std::string& path);
void write_dataset(std::ostream& out, const Dataset& dataset, const std::vector<std::string>& row_ids = {});
void write_dataset_file(const std::string& path, const Dataset& dataset, const std::vector<std::string>& row_ids = {});

json schema_to_json(const FeatureSchema& schema);
SchemaPtr schema_from_json(const json& j);

// Generator specification file: {"kind":"counts",...} or {"kind":"binary",...}.
struct BinarySpec {
  VectorXd profile;  // P(+1) per feature
};
using GeneratorSpec = std::variant<CountSchemaSpec, BinarySpec>;

json generator_spec_to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(const json& j);

// Fitted scorer parameters. Supports linear, reconstruction and naive-bayes.
json scorer_to_json(const Scorer& scorer);
std::unique_ptr<Scorer> scorer_from_json(const json& j);

json injection_to_json(const InjectionRecord& record, Index row);
InjectionRecord injection_from_json(const json& j);

json explanation_to_json(const Explanation& explanation, const Instance& x, const std::string& instance_id,
                         double anomaly_score, const json& config, std::uint64_t seed);

json remediation_to_json(const RemediationReport& report, const json& config);

json read_json_file(const std::string& path);
// Pretty-printed with a trailing newline.
void write_json_file(const std::string& path, const json& j);

}  // namespace ace::io
