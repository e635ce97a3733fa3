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

// Line-protocol model server used to exercise ExternalScorer. Reads
// {"features":[...]} records from stdin and answers {"score":s} on stdout.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <thread>

#include "ace/io.hpp"

namespace {

using nlohmann::json;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t end = std::min(text.find(',', start), text.size());
    if (end > start) out.push_back(std::stod(text.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference model server for the external-scorer protocol"};
  std::string weights_text;
  double bias = 0.0;
  std::string model_path;
  std::optional<double> constant;
  long exit_after = -1;
  long sleep_ms = 0;
  bool garbage = false;
  bool chatty = false;
  app.add_option("--weights", weights_text, "Comma-separated weights; score = max(0, w.x + b)");
  app.add_option("--bias", bias, "Bias for --weights");
  app.add_option("--model", model_path, "Serve a fitted model file instead");
  app.add_option("--constant", constant, "Always answer this score (may be invalid on purpose)");
  app.add_option("--exit-after", exit_after, "Exit after this many responses");
  app.add_option("--sleep-ms", sleep_ms, "Delay before every response");
  app.add_flag("--garbage", garbage, "Answer with a malformed line");
  app.add_flag("--stderr", chatty, "Log every request on stderr");
  CLI11_PARSE(app, argc, argv);

  std::unique_ptr<ace::Scorer> model;
  Eigen::VectorXd weights;
  try {
    if (!model_path.empty()) model = ace::io::scorer_from_json(ace::io::read_json_file(model_path));
    const std::vector<double> w = parse_list(weights_text);
    weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  } catch (const std::exception& e) {
    std::cerr << "echo-model: " << e.what() << '\n';
    return 2;
  }

  long served = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (exit_after >= 0 && served >= exit_after) return 0;
    if (chatty) std::cerr << "request " << served << '\n';
    if (sleep_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms));
    if (garbage) {
      std::cout << "not json" << std::endl;
      ++served;
      continue;
    }
    json request = json::parse(line, nullptr, false);
    if (request.is_discarded() || !request.contains("features")) {
      std::cerr << "echo-model: bad request\n";
      return 1;
    }
    const std::vector<double> features = request["features"].get<std::vector<double>>();
    const Eigen::Map<const Eigen::VectorXd> x(features.data(), static_cast<Eigen::Index>(features.size()));

    double score = 0.0;
    if (constant) {
      score = *constant;
    } else if (model) {
      score = model->batch_score(Eigen::MatrixXd(x.transpose()))[0];
    } else {
      if (weights.size() != x.size()) {
        std::cerr << "echo-model: expected " << weights.size() << " features\n";
        return 1;
      }
      score = std::max(0.0, weights.dot(x) + bias);
    }
    json response = json::object();
    response["score"] = score;
    std::cout << response.dump() << std::endl;
    ++served;
  }
  return 0;
}
