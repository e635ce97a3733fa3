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

#include <chrono>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include "ace/blackbox.hpp"

namespace ace {

// Wire format, one UTF-8 record per line:
//   request  {"features":[f1,...,fM]}
//   response {"score":s}
std::string encode_score_request(const Eigen::Ref<const VectorXd>& features);
// Throws kProtocolViolation unless `line` is exactly {"score":s} with s finite and >= 0.
double decode_score_response(std::string_view line);

// Scores by talking to a child process over stdin/stdout. The child is
// started with `/bin/sh -c command`; its stderr is forwarded line by line to
// std::clog. Requests are serialized: one line out, one line back.
//
// Constructing an ExternalScorer sets SIGPIPE to SIG_IGN for the process so a
// dead child surfaces as a write error instead of terminating the caller.
class ExternalScorer final : public Scorer {
 public:
  static constexpr std::chrono::milliseconds kDefaultTimeout{30000};

  ExternalScorer(SchemaPtr schema, std::string command,
                 std::chrono::milliseconds timeout = kDefaultTimeout);
  ~ExternalScorer() override;

  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  bool concurrent_safe() const override { return false; }
  const std::string& command() const { return command_; }

 protected:
  double score_row(const Eigen::Ref<const VectorXd>& x) const override;

 private:
  void write_line(const std::string& line) const;
  std::string read_line() const;
  [[noreturn]] void mark_unavailable(const std::string& why) const;

  std::string command_;
  std::chrono::milliseconds timeout_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  int child_stderr_ = -1;
  std::thread stderr_forwarder_;

  mutable std::mutex mutex_;
  mutable std::string pending_;
  mutable bool healthy_ = true;
};

AnomalyScore external_score(const ExternalScorer& scorer, const Instance& instance);

}  // namespace ace
