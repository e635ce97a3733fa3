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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <random>
#include <sstream>

#include "ace/blackbox.hpp"
#include "ace/datagen.hpp"
#include "ace/evaluation.hpp"
#include "ace/explainers.hpp"
#include "ace/external_scorer.hpp"
#include "ace/io.hpp"

namespace {

using ace::Index;
using ace::VectorXd;
using nlohmann::json;

// Decorrelates the injection-index stream from the data stream of the same seed.
constexpr std::uint64_t kIndexStreamOffset = 0x9E3779B97F4A7C15ULL;

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> out;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    size_t used = 0;
    long value = 0;
    try {
      value = std::stol(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) ace::fail(ace::ErrorCode::kInvalidArgument, "bad index '" + token + "'");
    out.push_back(value);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) ace::fail(ace::ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  out << text;
}

struct ExplainOptions {
  std::uint64_t seed = 0;
  Index neighbors = 5000;
  double variance = 0.01;
  double flip_probability = 0.1;
  std::optional<double> sigma;
  double alpha = 1.0;
  double beta = 50.0;
  Index max_iterations = 2000;
  double step_size = 1.0;
  double gradient_tolerance = 1e-6;
  Index top_k = 10;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--seed", seed, "Random seed")->capture_default_str();
    cmd.add_option("--neighbors", neighbors, "Neighbors sampled per explanation")->capture_default_str();
    cmd.add_option("--variance", variance, "Gaussian variance for continuous features")->capture_default_str();
    cmd.add_option("--flip-prob", flip_probability, "Flip probability for binary features")->capture_default_str();
    cmd.add_option("--sigma", sigma, "Kernel width (default 0.75*sqrt(M))");
    cmd.add_option("--alpha", alpha, "L2 regularization")->capture_default_str();
    cmd.add_option("--beta", beta, "KL regularizer weight (ACE-KL)")->capture_default_str();
    cmd.add_option("--max-iter", max_iterations, "ACE-KL iteration cap")->capture_default_str();
    cmd.add_option("--step", step_size, "ACE-KL initial step")->capture_default_str();
    cmd.add_option("--grad-tol", gradient_tolerance, "ACE-KL gradient tolerance")->capture_default_str();
    cmd.add_option("--top-k", top_k, "Ranked features to report")->capture_default_str();
  }

  ace::ExplainConfig resolve(std::uint64_t sample_seed) const {
    ace::ExplainConfig cfg;
    cfg.sampler = {neighbors, variance, flip_probability, sample_seed};
    cfg.kernel.sigma = sigma;
    cfg.ace = {alpha, top_k};
    cfg.ace_kl = {alpha, beta, max_iterations, step_size, gradient_tolerance, top_k};
    return cfg;
  }

  json echo(Index dimension, const std::vector<ace::Method>& methods) const {
    json method_names = json::array();
    for (ace::Method m : methods) method_names.push_back(ace::to_string(m));
    return {{"seed", seed},
            {"sampler", {{"n_neighbors", neighbors}, {"continuous_variance", variance}, {"flip_probability", flip_probability}}},
            {"kernel", {{"sigma", ace::KernelConfig{sigma}.width(dimension)}}},
            {"ace", {{"alpha", alpha}, {"top_k", top_k}}},
            {"ace_kl",
             {{"alpha", alpha},
              {"beta", beta},
              {"max_iterations", max_iterations},
              {"step_size", step_size},
              {"gradient_tolerance", gradient_tolerance}}},
            {"methods", method_names},
            {"top_k", top_k}};
  }
};

// The black box as seen by the explainers, plus the map from dataset values
// into the space it is explained in.
struct ScoringSetup {
  std::unique_ptr<ace::Scorer> owned;
  std::optional<ace::ReconstructionScorer> standardized;
  const ace::ReconstructionScorer* reconstruction = nullptr;

  const ace::Scorer& scorer() const {
    if (standardized) return *standardized;
    return *owned;
  }
  ace::Instance to_explained_space(const ace::Instance& raw) const {
    if (!reconstruction) return raw;
    return raw.with_values(reconstruction->standardize(raw.values()));
  }
};

void require_matching_schema(const ace::FeatureSchema& model, const ace::FeatureSchema& data) {
  if (model == data) return;
  std::ostringstream msg;
  msg << "model and dataset schemas differ:";
  if (model.dimension() != data.dimension()) {
    msg << " model has " << model.dimension() << " features, dataset " << data.dimension();
  } else {
    for (Index i = 0; i < model.dimension(); ++i) {
      if (!(model.feature(i) == data.feature(i))) {
        msg << " [" << i << "] model '" << model.feature(i).name << "' (" << ace::to_string(model.feature(i).kind)
            << ") vs dataset '" << data.feature(i).name << "' (" << ace::to_string(data.feature(i).kind) << ")";
      }
    }
  }
  ace::fail(ace::ErrorCode::kInvalidArgument, msg.str());
}

ScoringSetup load_scorer(const std::string& model_path, const std::string& external_cmd, double timeout_s,
                         const ace::Dataset& data) {
  if (model_path.empty() == external_cmd.empty()) {
    ace::fail(ace::ErrorCode::kInvalidArgument, "give exactly one of --model or --external-cmd");
  }
  ScoringSetup setup;
  if (!external_cmd.empty()) {
    const auto timeout = std::chrono::milliseconds(static_cast<long>(timeout_s * 1000.0));
    setup.owned = std::make_unique<ace::ExternalScorer>(data.schema, external_cmd, timeout);
    return setup;
  }
  setup.owned = ace::io::scorer_from_json(ace::io::read_json_file(model_path));
  require_matching_schema(setup.owned->schema(), *data.schema);
  if (const auto* recon = dynamic_cast<const ace::ReconstructionScorer*>(setup.owned.get())) {
    setup.reconstruction = recon;
    setup.standardized = recon->standardized_view();
  }
  return setup;
}

std::vector<ace::Method> resolve_methods(const std::string& text, const ScoringSetup& setup) {
  std::vector<ace::Method> methods = ace::parse_method_list(text);
  for (ace::Method m : methods) {
    if (m == ace::Method::kReconstruction && setup.reconstruction == nullptr) {
      ace::fail(ace::ErrorCode::kInvalidArgument, "AE_RECON requires a reconstruction model");
    }
  }
  return methods;
}

// ---------------------------------------------------------------------------

struct SpecArgs {
  std::string kind = "counts";
  std::uint64_t seed = 0;
  std::string out;
  std::string activities = "www_visit,www_upload,www_download";
  Index time_bins = 4;
  Index features = 112;
  double profile = 0.5;
};

int run_spec(const SpecArgs& a) {
  ace::io::GeneratorSpec spec;
  if (a.kind == "counts") {
    ace::CountSchemaSpec counts;
    counts.activities.clear();
    std::stringstream stream(a.activities);
    std::string name;
    while (std::getline(stream, name, ',')) {
      if (!name.empty()) counts.activities.push_back(name);
    }
    counts.time_bins = a.time_bins;
    std::mt19937_64 rng(a.seed);
    std::uniform_int_distribution<int> rate(ace::kDefaultMinRate, ace::kDefaultMaxRate);
    counts.rates.resize(counts.dimension());
    for (Index i = 0; i < counts.rates.size(); ++i) counts.rates[i] = rate(rng);
    counts.validate();
    spec = counts;
  } else if (a.kind == "binary") {
    if (a.features < 1) ace::fail(ace::ErrorCode::kInvalidArgument, "--features must be positive");
    if (!(a.profile > 0.0 && a.profile < 1.0)) ace::fail(ace::ErrorCode::kInvalidArgument, "--profile must lie in (0,1)");
    spec = ace::io::BinarySpec{VectorXd::Constant(a.features, a.profile)};
  } else {
    ace::fail(ace::ErrorCode::kInvalidArgument, "--kind must be counts or binary");
  }
  json j = ace::io::generator_spec_to_json(spec);
  j["seed"] = a.seed;
  write_text(a.out, j.dump(2) + "\n");
  return 0;
}

struct GenerateArgs {
  std::string spec_path;
  Index n = 1000;
  std::uint64_t seed = 0;
  std::string out;
  std::string inject;
  Index inject_random = 0;
  std::string policy = "uniform";
  std::string sidecar;
};

int run_generate(const GenerateArgs& a) {
  const ace::io::GeneratorSpec spec = ace::io::generator_spec_from_json(ace::io::read_json_file(a.spec_path));
  const bool injecting = !a.inject.empty() || a.inject_random > 0;
  const ace::GroundTruthPolicy policy = ace::parse_ground_truth_policy(a.policy);
  json config = {{"spec", ace::io::generator_spec_to_json(spec)}, {"n", a.n}, {"seed", a.seed}};

  if (const auto* binary = std::get_if<ace::io::BinarySpec>(&spec)) {
    if (injecting) ace::fail(ace::ErrorCode::kInvalidArgument, "injection applies to count specs only");
    ace::io::write_dataset_file(a.out, ace::generate_binary(binary->profile.size(), a.n, binary->profile, a.seed));
    return 0;
  }

  const auto& counts = std::get<ace::CountSchemaSpec>(spec);
  ace::Dataset data = ace::generate_counts(counts, a.n, a.seed);
  if (!injecting) {
    ace::io::write_dataset_file(a.out, data);
    return 0;
  }
  if (!a.inject.empty() && a.inject_random > 0) {
    ace::fail(ace::ErrorCode::kInvalidArgument, "use either --inject or --inject-random");
  }

  const std::vector<Index> fixed = parse_index_list(a.inject);
  std::mt19937_64 index_rng(a.seed + kIndexStreamOffset);
  json records = json::array();
  for (Index r = 0; r < data.size(); ++r) {
    const std::vector<Index> indices =
        a.inject_random > 0 ? ace::choose_indices(counts.dimension(), a.inject_random, index_rng) : fixed;
    const ace::InjectionRecord record = ace::inject_anomaly(data.instance(r), indices, counts);
    data.rows.row(r) = record.perturbed.transpose();
    records.push_back(ace::io::injection_to_json(record, r));
  }
  config["inject"] = a.inject;
  config["inject_random"] = a.inject_random;
  ace::io::write_dataset_file(a.out, data);
  const std::string sidecar = a.sidecar.empty() ? a.out + ".injection.json" : a.sidecar;
  ace::io::write_json_file(sidecar, {{"policy", ace::to_string(policy)}, {"config", config}, {"records", records}});
  return 0;
}

struct FitArgs {
  std::string data;
  std::string scorer;
  Index rank = 4;
  double smoothing = 1.0;
  std::string out;
};

int run_fit(const FitArgs& a) {
  const ace::io::DatasetFile file = ace::io::read_dataset_file(a.data);
  const ace::FeatureSchema& schema = *file.dataset.schema;
  json j;
  json config = {{"scorer", a.scorer}};
  if (a.scorer == "reconstruction") {
    const std::vector<Index> binary = schema.binary_indices();
    if (!binary.empty()) {
      std::string names;
      for (Index i : binary) names += " '" + schema.feature(i).name + "'";
      ace::fail(ace::ErrorCode::kInvalidArgument, "reconstruction scorer needs continuous columns; binary:" + names);
    }
    j = ace::io::scorer_to_json(ace::fit_reconstruction_scorer(file.dataset, a.rank));
    config["rank"] = a.rank;
  } else if (a.scorer == "naive-bayes") {
    const std::vector<Index> continuous = schema.continuous_indices();
    if (!continuous.empty()) {
      std::string names;
      for (Index i : continuous) names += " '" + schema.feature(i).name + "'";
      ace::fail(ace::ErrorCode::kInvalidArgument, "naive-bayes needs binary columns; continuous:" + names);
    }
    j = ace::io::scorer_to_json(ace::fit_naive_bayes(file.dataset, a.smoothing));
    config["smoothing"] = a.smoothing;
  } else {
    ace::fail(ace::ErrorCode::kInvalidArgument, "--scorer must be reconstruction or naive-bayes");
  }
  j["config"] = config;
  ace::io::write_json_file(a.out, j);
  return 0;
}

struct ScorerArgs {
  std::string model;
  std::string external_cmd;
  double timeout_s = 30.0;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--model", model, "Fitted model file");
    cmd.add_option("--external-cmd", external_cmd, "Shell command of a line-protocol model server");
    cmd.add_option("--timeout", timeout_s, "External scorer response timeout in seconds")->capture_default_str();
  }
};

struct ExplainArgs {
  ScorerArgs scorer;
  std::string data;
  Index row = 0;
  std::string methods = "ace,ace-kl,lime";
  ExplainOptions options;
  std::string out;
  std::string chart_csv;
};

int run_explain(const ExplainArgs& a) {
  const ace::io::DatasetFile file = ace::io::read_dataset_file(a.data);
  const ScoringSetup setup = load_scorer(a.scorer.model, a.scorer.external_cmd, a.scorer.timeout_s, file.dataset);
  const std::vector<ace::Method> methods = resolve_methods(a.methods, setup);
  const ace::Instance raw = file.dataset.instance(a.row);
  const ace::Instance x = setup.to_explained_space(raw);

  const ace::ExplainConfig cfg = a.options.resolve(a.options.seed);
  json config = a.options.echo(x.dimension(), methods);
  config["row"] = a.row;
  const std::vector<ace::Explanation> explanations = ace::explain_methods(x, setup.scorer(), methods, cfg);
  const double score = setup.scorer().score(x).value();

  json records = json::array();
  std::ostringstream chart;
  chart << "# config: " << config.dump() << "\nmethod,feature,contribution\n";
  for (const ace::Explanation& e : explanations) {
    records.push_back(ace::io::explanation_to_json(e, raw, file.row_id(a.row), score, config, a.options.seed));
    for (const ace::RankedFeature& f : e.ranked_top_k()) {
      chart << ace::to_string(e.method()) << ',' << x.schema().feature(f.index).name << ','
            << ace::io::format_double(f.contribution) << '\n';
    }
  }
  write_text(a.out, json{{"config", config}, {"explanations", records}}.dump(2) + "\n");
  if (!a.chart_csv.empty()) write_text(a.chart_csv, chart.str());
  return 0;
}

struct EvaluateArgs {
  ScorerArgs scorer;
  std::string data;
  std::string sidecar;
  std::string methods = "ace,ace-kl,lime";
  Index trials = 50;
  std::string policy;
  ExplainOptions options;
  std::string out;
  std::string summary;
};

int run_evaluate(const EvaluateArgs& a) {
  if (a.sidecar.empty()) ace::fail(ace::ErrorCode::kInvalidArgument, "--sidecar is required");
  const json sidecar = ace::io::read_json_file(a.sidecar);
  if (!sidecar.contains("records") || !sidecar["records"].is_array()) {
    ace::fail(ace::ErrorCode::kInvalidArgument, "sidecar has no injection records");
  }
  const ace::GroundTruthPolicy policy = ace::parse_ground_truth_policy(
      a.policy.empty() ? sidecar.value("policy", std::string("uniform")) : a.policy);

  const ace::io::DatasetFile file = ace::io::read_dataset_file(a.data);
  const ScoringSetup setup = load_scorer(a.scorer.model, a.scorer.external_cmd, a.scorer.timeout_s, file.dataset);
  const std::vector<ace::Method> requested = resolve_methods(a.methods, setup);
  std::vector<ace::Method> methods = requested;
  if (std::find(methods.begin(), methods.end(), ace::Method::kLimeRegression) == methods.end()) {
    methods.push_back(ace::Method::kLimeRegression);
  }

  const Index trials = std::min<Index>(a.trials, static_cast<Index>(sidecar["records"].size()));
  if (trials < 1) ace::fail(ace::ErrorCode::kInvalidArgument, "no trials to run");
  json config = a.options.echo(file.dataset.dimension(), requested);
  config["trials"] = trials;
  config["policy"] = ace::to_string(policy);

  std::ostringstream per_trial;
  per_trial << "# config: " << config.dump() << "\ntrial,row,method,kl,top1_hit\n";
  std::vector<double> kl_sum(methods.size(), 0.0), wins(methods.size(), 0.0), hits(methods.size(), 0.0);
  for (Index t = 0; t < trials; ++t) {
    const json& rec = sidecar["records"][static_cast<size_t>(t)];
    const Index row = rec.value("row", t);
    const ace::GroundTruth truth = ace::ground_truth_for_injection(ace::io::injection_from_json(rec), policy);
    const ace::Instance x = setup.to_explained_space(file.dataset.instance(row));
    const auto results =
        ace::compare_methods(x, setup.scorer(), truth, methods, a.options.resolve(a.options.seed + t));
    const double lime_kl = results.back().kl;
    for (size_t k = 0; k < results.size(); ++k) {
      const auto& r = results[k];
      const Index top = r.explanation.ranked_top_k().front().index;
      const bool hit =
          std::find(truth.perturbed_indices.begin(), truth.perturbed_indices.end(), top) != truth.perturbed_indices.end();
      kl_sum[k] += r.kl;
      wins[k] += r.kl <= lime_kl ? 1.0 : 0.0;
      hits[k] += hit ? 1.0 : 0.0;
      if (k < requested.size()) {
        per_trial << t << ',' << row << ',' << ace::to_string(r.method) << ',' << ace::io::format_double(r.kl) << ','
                  << (hit ? 1 : 0) << '\n';
      }
    }
  }

  std::ostringstream table;
  table << "# config: " << config.dump() << "\nmethod,trials,mean_kl,win_rate_vs_lime,top1_hit_rate\n";
  const double n = static_cast<double>(trials);
  for (size_t k = 0; k < requested.size(); ++k) {
    table << ace::to_string(requested[k]) << ',' << trials << ',' << ace::io::format_double(kl_sum[k] / n) << ','
          << ace::io::format_double(wins[k] / n) << ',' << ace::io::format_double(hits[k] / n) << '\n';
  }
  if (!a.out.empty()) write_text(a.out, per_trial.str());
  write_text(a.summary, table.str());
  return 0;
}

struct RemediateArgs {
  ScorerArgs scorer;
  std::string data;
  Index row = 0;
  Index k = 10;
  std::string method = "ace";
  Index repeats = 1;
  ExplainOptions options;
  std::string out;
};

int run_remediate(const RemediateArgs& a) {
  const ace::io::DatasetFile file = ace::io::read_dataset_file(a.data);
  if (!file.dataset.schema->all_binary()) {
    ace::fail(ace::ErrorCode::kInvalidArgument, "remediation flips features and needs an all-binary dataset");
  }
  const ScoringSetup setup = load_scorer(a.scorer.model, a.scorer.external_cmd, a.scorer.timeout_s, file.dataset);
  const ace::Method method = ace::parse_method(a.method);
  if (method == ace::Method::kReconstruction) {
    ace::fail(ace::ErrorCode::kInvalidArgument, "remediation ranks with ace, ace-kl or lime");
  }
  const ace::Instance x = setup.to_explained_space(file.dataset.instance(a.row));
  const std::vector<ace::Method> one{method};
  const ace::Explanation explanation =
      ace::explain_methods(x, setup.scorer(), one, a.options.resolve(a.options.seed)).front();
  const ace::RemediationReport report = ace::remediate(x, setup.scorer(), explanation, a.k, a.options.seed, a.repeats);

  json config = a.options.echo(x.dimension(), one);
  config["row"] = a.row;
  config["k"] = a.k;
  config["repeats"] = a.repeats;
  write_text(a.out, ace::io::remediation_to_json(report, config).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anomaly contribution explainer"};
  app.require_subcommand(1);

  SpecArgs spec;
  auto* spec_cmd = app.add_subcommand("spec", "Write a generator spec with seeded default parameters");
  spec_cmd->add_option("--kind", spec.kind, "counts or binary")->capture_default_str();
  spec_cmd->add_option("--seed", spec.seed, "Seed for the default rates")->capture_default_str();
  spec_cmd->add_option("--out", spec.out, "Output file (default stdout)");
  spec_cmd->add_option("--activities", spec.activities, "Count activities")->capture_default_str();
  spec_cmd->add_option("--time-bins", spec.time_bins, "Time bins per activity")->capture_default_str();
  spec_cmd->add_option("--features", spec.features, "Binary feature count")->capture_default_str();
  spec_cmd->add_option("--profile", spec.profile, "P(+1) for every binary feature")->capture_default_str();

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Generate a synthetic dataset, optionally with injected anomalies");
  gen_cmd->add_option("--spec", gen.spec_path, "Generator spec file")->required();
  gen_cmd->add_option("--n", gen.n, "Rows")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output CSV")->required();
  gen_cmd->add_option("--inject", gen.inject, "Comma-separated feature indices to perturb in every row");
  gen_cmd->add_option("--inject-random", gen.inject_random, "Perturb this many random features per row");
  gen_cmd->add_option("--policy", gen.policy, "Ground-truth policy: uniform or proportional")->capture_default_str();
  gen_cmd->add_option("--sidecar", gen.sidecar, "Injection sidecar path (default <out>.injection.json)");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a scorer to a dataset");
  fit_cmd->add_option("--data", fit.data, "Training CSV")->required();
  fit_cmd->add_option("--scorer", fit.scorer, "reconstruction or naive-bayes")->required();
  fit_cmd->add_option("--rank", fit.rank, "Principal components kept")->capture_default_str();
  fit_cmd->add_option("--smoothing", fit.smoothing, "Naive Bayes additive smoothing")->capture_default_str();
  fit_cmd->add_option("--out", fit.out, "Model file")->required();

  ExplainArgs explain;
  auto* explain_cmd = app.add_subcommand("explain", "Explain one row's anomaly score");
  explain.scorer.add_to(*explain_cmd);
  explain_cmd->add_option("--data", explain.data, "Dataset CSV")->required();
  explain_cmd->add_option("--row", explain.row, "Row index (0-based)")->capture_default_str();
  explain_cmd->add_option("--methods", explain.methods, "ace,ace-kl,lime,ae-recon")->capture_default_str();
  explain_cmd->add_option("--out", explain.out, "Explanation JSON (default stdout)");
  explain_cmd->add_option("--chart-csv", explain.chart_csv, "Bar-chart CSV of the ranked contributions");
  explain.options.add_to(*explain_cmd);

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "KL of each method against injected ground truth");
  eval.scorer.add_to(*eval_cmd);
  eval_cmd->add_option("--data", eval.data, "Injected dataset CSV")->required();
  eval_cmd->add_option("--sidecar", eval.sidecar, "Injection sidecar");
  eval_cmd->add_option("--methods", eval.methods, "ace,ace-kl,lime,ae-recon")->capture_default_str();
  eval_cmd->add_option("--trials", eval.trials, "Rows to evaluate")->capture_default_str();
  eval_cmd->add_option("--policy", eval.policy, "Override the sidecar's ground-truth policy");
  eval_cmd->add_option("--out", eval.out, "Per-trial CSV");
  eval_cmd->add_option("--summary", eval.summary, "Summary CSV (default stdout)");
  eval.options.add_to(*eval_cmd);

  RemediateArgs rem;
  auto* rem_cmd = app.add_subcommand("remediate", "Flip top-ranked binary features and rescore");
  rem.scorer.add_to(*rem_cmd);
  rem_cmd->add_option("--data", rem.data, "Binary dataset CSV")->required();
  rem_cmd->add_option("--row", rem.row, "Row index (0-based)")->capture_default_str();
  rem_cmd->add_option("--k", rem.k, "Features to flip")->capture_default_str();
  rem_cmd->add_option("--method", rem.method, "ace, ace-kl or lime")->capture_default_str();
  rem_cmd->add_option("--repeats", rem.repeats, "Random-arm draws to average")->capture_default_str();
  rem_cmd->add_option("--out", rem.out, "Report JSON (default stdout)");
  rem.options.add_to(*rem_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*spec_cmd) return run_spec(spec);
    if (*gen_cmd) return run_generate(gen);
    if (*fit_cmd) return run_fit(fit);
    if (*explain_cmd) return run_explain(explain);
    if (*eval_cmd) return run_evaluate(eval);
    if (*rem_cmd) return run_remediate(rem);
  } catch (const ace::Error& e) {
    std::cerr << "error (" << ace::to_string(e.code()) << "): " << e.what() << '\n';
    return ace::exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error (invalid-argument): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
