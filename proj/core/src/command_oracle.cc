// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "simexplain/command_oracle.h"

#include <csignal>
#include <cmath>
#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>

#include "simexplain/errors.h"
#include "simexplain/serialization.h"

namespace simexplain {

namespace {

bool read_line(std::FILE* f, std::string& line) {
  line.clear();
  int c;
  while ((c = std::fgetc(f)) != EOF) {
    if (c == '\n') return true;
    line.push_back(static_cast<char>(c));
  }
  return !line.empty();
}

double parse_response(const std::string& line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::exception&) {
    throw OracleError("external oracle sent an unparseable line: '" + line + "'");
  }
  if (j.is_object() && j.contains("distance")) j = j.at("distance");
  if (!j.is_number()) {
    throw OracleError("external oracle response is not a number: '" + line + "'");
  }
  return j.get<double>();
}

}  // namespace

CommandOracle::CommandOracle(std::string command, std::size_t batch_size,
                             bool symmetric, bool concurrency_safe)
    : command_(std::move(command)),
      batch_size_(std::max<std::size_t>(1, batch_size)),
      symmetric_(symmetric),
      concurrency_safe_(concurrency_safe) {
  if (command_.empty()) throw ValidationError("external oracle: empty command");
  // A dead child must surface as an OracleError, not a signal.
  std::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];   // parent -> child
  int out_pipe[2];  // child -> parent
  if (pipe(in_pipe) != 0) throw OracleError("external oracle: pipe() failed");
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw OracleError("external oracle: pipe() failed");
  }
  child_ = fork();
  if (child_ < 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    throw OracleError("external oracle: fork() failed");
  }
  if (child_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  fcntl(in_pipe[1], F_SETFD, FD_CLOEXEC);
  fcntl(out_pipe[0], F_SETFD, FD_CLOEXEC);
  to_child_ = fdopen(in_pipe[1], "w");
  from_child_ = fdopen(out_pipe[0], "r");
  if (!to_child_ || !from_child_) {
    shutdown();
    throw OracleError("external oracle: fdopen() failed");
  }
}

CommandOracle::~CommandOracle() { shutdown(); }

void CommandOracle::shutdown() {
  if (to_child_) {
    std::fclose(to_child_);
    to_child_ = nullptr;
  }
  if (from_child_) {
    std::fclose(from_child_);
    from_child_ = nullptr;
  }
  if (child_ > 0) {
    int status = 0;
    waitpid(child_, &status, 0);
    child_ = -1;
  }
}

std::vector<double> CommandOracle::exchange(
    std::span<const InstancePair> batch) {
  if (!to_child_ || !from_child_) {
    throw OracleError("external oracle '" + command_ + "' is not running");
  }
  std::string payload;
  for (const InstancePair& p : batch) {
    payload += pair_to_json(p).dump();
    payload += '\n';
  }
  if (std::fwrite(payload.data(), 1, payload.size(), to_child_) !=
          payload.size() ||
      std::fflush(to_child_) != 0) {
    throw OracleError("external oracle '" + command_ +
                      "' closed its input (did it exit?)");
  }
  ++round_trips_;
  std::vector<double> out;
  out.reserve(batch.size());
  std::string line;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (!read_line(from_child_, line)) {
      throw OracleError("external oracle '" + command_ + "' answered " +
                        std::to_string(i) + " of " +
                        std::to_string(batch.size()) + " requests");
    }
    double v = parse_response(line);
    if (!std::isfinite(v)) {
      throw OracleError("external oracle returned a non-finite distance");
    }
    out.push_back(v);
  }
  return out;
}

double CommandOracle::distance(const Instance& a, const Instance& b) {
  const InstancePair p{a, b};
  return exchange(std::span<const InstancePair>(&p, 1)).front();
}

std::vector<double> CommandOracle::distances(
    std::span<const InstancePair> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (std::size_t start = 0; start < pairs.size(); start += batch_size_) {
    std::size_t len = std::min(batch_size_, pairs.size() - start);
    auto part = exchange(pairs.subspan(start, len));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

void CommandOracle::handshake(const InstancePair& probe) {
  try {
    (void)distance(probe.left, probe.right);
  } catch (const OracleError& e) {
    throw OracleError(std::string("external oracle handshake failed: ") +
                      e.what());
  }
}

}  // namespace simexplain
