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

#include "ace/io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ace::io {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    const size_t first = field.find_first_not_of(" \t");
    const size_t last = field.find_last_not_of(" \t");
    fields.push_back(first == std::string::npos ? std::string() : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool is_kind_token(const std::string& token) { return token == "binary" || token == "continuous"; }

std::vector<double> vector_to_list(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

VectorXd list_to_vector(const json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::kInvalidArgument, std::string(what) + " must be an array");
  VectorXd v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(ErrorCode::kInvalidArgument, std::string(what) + " must hold numbers");
    v[static_cast<Index>(i)] = j[i].get<double>();
  }
  return v;
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::kInvalidArgument, std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) fail(ErrorCode::kInvalidArgument, "cannot format number");
  return std::string(buffer, ptr);
}

std::string DatasetFile::row_id(Index row) const {
  if (row_ids.empty()) return std::to_string(row);
  return row_ids.at(static_cast<size_t>(row));
}

DatasetFile read_dataset(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(split_csv_line(line));
  }
  if (lines.empty()) fail(ErrorCode::kInvalidArgument, "dataset: missing header row");

  const std::vector<std::string>& header = lines.front();
  const size_t offset = !header.empty() && header.front() == "id" ? 1 : 0;
  const size_t m = header.size() - offset;
  if (m == 0) fail(ErrorCode::kInvalidArgument, "dataset: no feature columns");

  std::vector<FeatureKind> kinds(m, FeatureKind::kContinuous);
  size_t first_data = 1;
  if (lines.size() > 1 && lines[1].size() == header.size()) {
    bool all_kinds = true;
    for (size_t c = offset; c < header.size(); ++c) all_kinds = all_kinds && is_kind_token(lines[1][c]);
    if (all_kinds) {
      for (size_t c = 0; c < m; ++c) kinds[c] = parse_feature_kind(lines[1][c + offset]);
      first_data = 2;
    }
  }

  std::vector<Feature> features;
  for (size_t c = 0; c < m; ++c) features.push_back({header[c + offset], kinds[c]});

  DatasetFile file;
  file.dataset.schema = make_schema(std::move(features));
  file.dataset.rows.resize(static_cast<Index>(lines.size() - first_data), static_cast<Index>(m));
  for (size_t r = first_data; r < lines.size(); ++r) {
    const auto& fields = lines[r];
    if (fields.size() != header.size()) {
      fail(ErrorCode::kInvalidArgument, "dataset: line " + std::to_string(r + 1) + " has " +
                                            std::to_string(fields.size()) + " fields, expected " +
                                            std::to_string(header.size()));
    }
    if (offset == 1) file.row_ids.push_back(fields[0]);
    for (size_t c = 0; c < m; ++c) {
      double value = 0.0;
      if (!parse_double(fields[c + offset], value)) {
        fail(ErrorCode::kInvalidArgument, "dataset: line " + std::to_string(r + 1) + ", column '" + header[c + offset] +
                                              "': not a finite number");
      }
      file.dataset.rows(static_cast<Index>(r - first_data), static_cast<Index>(c)) = value;
    }
  }

  // 0/1 binary columns become -1/+1.
  auto& rows = file.dataset.rows;
  for (Index c = 0; c < rows.cols(); ++c) {
    if (kinds[static_cast<size_t>(c)] != FeatureKind::kBinary) continue;
    const auto col = rows.col(c).array();
    const bool plus_minus = ((col == 1.0) || (col == -1.0)).all();
    const bool zero_one = ((col == 1.0) || (col == 0.0)).all();
    if (plus_minus) continue;
    if (!zero_one) {
      fail(ErrorCode::kInvalidArgument,
           "dataset: binary column '" + file.dataset.schema->feature(c).name + "' must hold -1/1 or 0/1");
    }
    std::clog << "notice: recoding 0/1 column '" << file.dataset.schema->feature(c).name << "' to -1/+1\n";
    rows.col(c) = (2.0 * col - 1.0).matrix();
  }
  file.dataset.validate();
  return file;
}

DatasetFile read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot open dataset '" + path + "'");
  return read_dataset(in);
}

void write_dataset(std::ostream& out, const Dataset& dataset, const std::vector<std::string>& row_ids) {
  const bool with_ids = !row_ids.empty();
  if (with_ids && static_cast<Index>(row_ids.size()) != dataset.size()) {
    fail(ErrorCode::kInvalidArgument, "one row id per row expected");
  }
  const FeatureSchema& schema = *dataset.schema;
  auto write_row = [&](auto&& cell_at) {
    for (Index c = 0; c < schema.dimension(); ++c) {
      if (c > 0 || with_ids) out << ',';
      out << cell_at(c);
    }
    out << '\n';
  };
  if (with_ids) out << "id";
  write_row([&](Index c) { return schema.feature(c).name; });
  if (with_ids) out << "";
  write_row([&](Index c) { return std::string(to_string(schema.feature(c).kind)); });
  for (Index r = 0; r < dataset.size(); ++r) {
    if (with_ids) out << row_ids[static_cast<size_t>(r)];
    write_row([&](Index c) { return format_double(dataset.rows(r, c)); });
  }
}

void write_dataset_file(const std::string& path, const Dataset& dataset, const std::vector<std::string>& row_ids) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  write_dataset(out, dataset, row_ids);
  if (!out) fail(ErrorCode::kInvalidArgument, "write to '" + path + "' failed");
}

json schema_to_json(const FeatureSchema& schema) {
  json features = json::array();
  for (const Feature& f : schema.features()) features.push_back({{"name", f.name}, {"kind", to_string(f.kind)}});
  return features;
}

SchemaPtr schema_from_json(const json& j) {
  if (!j.is_array()) fail(ErrorCode::kInvalidArgument, "schema must be an array");
  std::vector<Feature> features;
  for (const json& f : j) {
    features.push_back({require(f, "name").get<std::string>(), parse_feature_kind(require(f, "kind").get<std::string>())});
  }
  return make_schema(std::move(features));
}

json generator_spec_to_json(const GeneratorSpec& spec) {
  if (const auto* counts = std::get_if<CountSchemaSpec>(&spec)) {
    return {{"kind", "counts"},
            {"activities", counts->activities},
            {"time_bins", counts->time_bins},
            {"rates", vector_to_list(counts->rates)}};
  }
  const auto& binary = std::get<BinarySpec>(spec);
  return {{"kind", "binary"}, {"profile", vector_to_list(binary.profile)}};
}

GeneratorSpec generator_spec_from_json(const json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "counts") {
    CountSchemaSpec spec;
    spec.activities = require(j, "activities").get<std::vector<std::string>>();
    spec.time_bins = require(j, "time_bins").get<Index>();
    spec.rates = list_to_vector(require(j, "rates"), "rates");
    spec.validate();
    return spec;
  }
  if (kind == "binary") {
    BinarySpec spec{list_to_vector(require(j, "profile"), "profile")};
    if (spec.profile.size() < 1) fail(ErrorCode::kInvalidArgument, "binary spec: empty profile");
    return spec;
  }
  fail(ErrorCode::kInvalidArgument, "unknown generator spec kind '" + kind + "'");
}

json scorer_to_json(const Scorer& scorer) {
  json j;
  j["schema"] = schema_to_json(scorer.schema());
  if (const auto* linear = dynamic_cast<const LinearScorer*>(&scorer)) {
    j["kind"] = "linear";
    j["weights"] = vector_to_list(linear->weights());
    j["bias"] = linear->bias();
  } else if (const auto* recon = dynamic_cast<const ReconstructionScorer*>(&scorer)) {
    j["kind"] = "reconstruction";
    j["rank"] = recon->rank();
    j["feature_means"] = vector_to_list(recon->feature_means());
    j["feature_stds"] = vector_to_list(recon->feature_stds());
    json basis = json::array();
    for (Index r = 0; r < recon->basis().rows(); ++r) basis.push_back(vector_to_list(recon->basis().row(r).transpose()));
    j["basis"] = std::move(basis);
  } else if (const auto* nb = dynamic_cast<const NaiveBayesScorer*>(&scorer)) {
    j["kind"] = "naive-bayes";
    j["theta"] = vector_to_list(nb->theta());
    j["smoothing"] = nb->smoothing();
  } else {
    fail(ErrorCode::kInvalidArgument, "this scorer cannot be serialized");
  }
  return j;
}

std::unique_ptr<Scorer> scorer_from_json(const json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  SchemaPtr schema = schema_from_json(require(j, "schema"));
  if (kind == "linear") {
    return std::make_unique<LinearScorer>(schema, list_to_vector(require(j, "weights"), "weights"),
                                          require(j, "bias").get<double>());
  }
  if (kind == "reconstruction") {
    const json& rows = require(j, "basis");
    const Index rank = require(j, "rank").get<Index>();
    if (!rows.is_array() || static_cast<Index>(rows.size()) != schema->dimension()) {
      fail(ErrorCode::kInvalidArgument, "basis must have one row per feature");
    }
    MatrixXd basis(schema->dimension(), rank);
    for (Index r = 0; r < basis.rows(); ++r) {
      const VectorXd row = list_to_vector(rows[static_cast<size_t>(r)], "basis row");
      if (row.size() != rank) fail(ErrorCode::kInvalidArgument, "basis row length must equal rank");
      basis.row(r) = row.transpose();
    }
    return std::make_unique<ReconstructionScorer>(schema, std::move(basis),
                                                  list_to_vector(require(j, "feature_means"), "feature_means"),
                                                  list_to_vector(require(j, "feature_stds"), "feature_stds"));
  }
  if (kind == "naive-bayes") {
    return std::make_unique<NaiveBayesScorer>(schema, list_to_vector(require(j, "theta"), "theta"),
                                              require(j, "smoothing").get<double>());
  }
  fail(ErrorCode::kInvalidArgument, "unknown model kind '" + kind + "'");
}

json injection_to_json(const InjectionRecord& record, Index row) {
  return {{"row", row},
          {"perturbed_indices", record.perturbed_indices},
          {"injected_deltas", vector_to_list(record.injected_deltas)},
          {"base", vector_to_list(record.base)}};
}

InjectionRecord injection_from_json(const json& j) {
  InjectionRecord record;
  record.perturbed_indices = require(j, "perturbed_indices").get<std::vector<Index>>();
  record.injected_deltas = list_to_vector(require(j, "injected_deltas"), "injected_deltas");
  record.base = list_to_vector(require(j, "base"), "base");
  record.perturbed = record.base;
  if (record.injected_deltas.size() != static_cast<Index>(record.perturbed_indices.size())) {
    fail(ErrorCode::kInvalidArgument, "sidecar: one delta per perturbed index expected");
  }
  for (size_t k = 0; k < record.perturbed_indices.size(); ++k) {
    const Index i = record.perturbed_indices[k];
    if (i < 0 || i >= record.base.size()) fail(ErrorCode::kInvalidArgument, "sidecar: perturbed index out of range");
    record.perturbed[i] += record.injected_deltas[static_cast<Index>(k)];
  }
  return record;
}

json explanation_to_json(const Explanation& explanation, const Instance& x, const std::string& instance_id,
                         double anomaly_score, const json& config, std::uint64_t seed) {
  const FeatureSchema& schema = x.schema();
  json contributions = json::array();
  for (Index i : explanation.ranking()) {
    contributions.push_back(
        {{"feature", schema.feature(i).name}, {"value", x[i]}, {"contribution", explanation.contributions()[i]}});
  }
  json top = json::array();
  for (const RankedFeature& f : explanation.ranked_top_k()) {
    top.push_back({{"index", f.index}, {"feature", schema.feature(f.index).name}, {"contribution", f.contribution}});
  }
  return {{"method", to_string(explanation.method())},
          {"instance_id", instance_id},
          {"anomaly_score", anomaly_score},
          {"contributions", std::move(contributions)},
          {"ranked_top_k", std::move(top)},
          {"config_echo", config},
          {"seed", seed}};
}

json remediation_to_json(const RemediationReport& report, const json& config) {
  return {{"original_score", report.original_score},
          {"remediated_score_method", report.remediated_score_method},
          {"remediated_score_random", report.remediated_score_random},
          {"flipped_indices_method", report.flipped_indices_method},
          {"flipped_indices_random", report.flipped_indices_random},
          {"config", config}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot open '" + path + "'");
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) fail(ErrorCode::kInvalidArgument, "'" + path + "' is not valid JSON");
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) fail(ErrorCode::kInvalidArgument, "write to '" + path + "' failed");
}

}  // namespace ace::io
