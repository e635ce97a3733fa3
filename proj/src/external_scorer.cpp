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

#include "ace/external_scorer.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <iostream>
#include <json.hpp>

namespace ace {
namespace {

using nlohmann::json;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

void forward_stderr(int fd, std::string tag) {
  std::string buffer;
  char chunk[4096];
  for (;;) {
    const ssize_t n = ::read(fd, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buffer.append(chunk, static_cast<size_t>(n));
    size_t newline;
    while ((newline = buffer.find('\n')) != std::string::npos) {
      std::clog << "[" << tag << "] " << buffer.substr(0, newline) << '\n';
      buffer.erase(0, newline + 1);
    }
  }
  if (!buffer.empty()) std::clog << "[" << tag << "] " << buffer << '\n';
  ::close(fd);
}

}  // namespace

std::string encode_score_request(const Eigen::Ref<const VectorXd>& features) {
  json values = json::array();
  for (Index i = 0; i < features.size(); ++i) values.push_back(features[i]);
  json request = json::object();
  request["features"] = std::move(values);
  return request.dump();
}

double decode_score_response(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  json parsed = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object() || parsed.size() != 1 || !parsed.contains("score")) {
    fail(ErrorCode::kProtocolViolation, "external scorer: malformed response '" + std::string(line) + "'");
  }
  const json& value = parsed["score"];
  if (!value.is_number()) fail(ErrorCode::kProtocolViolation, "external scorer: score is not a number");
  const double score = value.get<double>();
  if (!std::isfinite(score) || score < 0.0) {
    fail(ErrorCode::kProtocolViolation, "external scorer: score must be finite and non-negative, got " + value.dump());
  }
  return score;
}

ExternalScorer::ExternalScorer(SchemaPtr schema, std::string command, std::chrono::milliseconds timeout)
    : Scorer(std::move(schema)), command_(std::move(command)), timeout_(timeout) {
  if (command_.empty()) fail(ErrorCode::kInvalidArgument, "external scorer: empty command");
  ignore_sigpipe();

  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) fail(ErrorCode::kScorerUnavailable, "pipe failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    fail(ErrorCode::kScorerUnavailable, "pipe failed");
  }
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    fail(ErrorCode::kScorerUnavailable, "pipe failed");
  }

  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) ::close(fd);
    fail(ErrorCode::kScorerUnavailable, std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    ::signal(SIGPIPE, SIG_DFL);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }

  pid_ = pid;
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  child_stderr_ = err_pipe[0];
  stderr_forwarder_ = std::thread(forward_stderr, child_stderr_, std::string("external-scorer"));
}

ExternalScorer::~ExternalScorer() {
  close_fd(to_child_);
  close_fd(from_child_);
  if (pid_ > 0) {
    int status = 0;
    bool reaped = false;
    for (int i = 0; i < 100 && !reaped; ++i) {
      reaped = ::waitpid(pid_, &status, WNOHANG) == pid_;
      if (!reaped) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    if (!reaped) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
  }
  if (stderr_forwarder_.joinable()) stderr_forwarder_.join();
}

void ExternalScorer::mark_unavailable(const std::string& why) const {
  healthy_ = false;
  fail(ErrorCode::kScorerUnavailable, "external scorer '" + command_ + "': " + why);
}

void ExternalScorer::write_line(const std::string& line) const {
  std::string out = line;
  out.push_back('\n');
  size_t written = 0;
  while (written < out.size()) {
    const ssize_t n = ::write(to_child_, out.data() + written, out.size() - written);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) mark_unavailable(std::string("write failed: ") + std::strerror(errno));
    written += static_cast<size_t>(n);
  }
}

std::string ExternalScorer::read_line() const {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  for (;;) {
    const size_t newline = pending_.find('\n');
    if (newline != std::string::npos) {
      std::string line = pending_.substr(0, newline);
      pending_.erase(0, newline + 1);
      return line;
    }
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) mark_unavailable("timed out waiting for a response");
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready < 0) mark_unavailable(std::string("poll failed: ") + std::strerror(errno));
    if (ready == 0) mark_unavailable("timed out waiting for a response");
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) mark_unavailable("child closed its output (exited?)");
    pending_.append(chunk, static_cast<size_t>(n));
  }
}

double ExternalScorer::score_row(const Eigen::Ref<const VectorXd>& x) const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!healthy_) fail(ErrorCode::kScorerUnavailable, "external scorer '" + command_ + "' is no longer healthy");
  write_line(encode_score_request(x));
  const std::string line = read_line();
  try {
    return decode_score_response(line);
  } catch (const Error&) {
    healthy_ = false;  // a child that broke the protocol is not trusted again
    throw;
  }
}

AnomalyScore external_score(const ExternalScorer& scorer, const Instance& instance) {
  return scorer.score(instance);
}

}  // namespace ace
