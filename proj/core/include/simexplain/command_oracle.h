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

#ifndef SIMEXPLAIN_COMMAND_ORACLE_H_
#define SIMEXPLAIN_COMMAND_ORACLE_H_

#include <cstdint>
#include <cstdio>
#include <string>
#include <sys/types.h>

#include "simexplain/oracle.h"

namespace simexplain {

// Black box hosted in a child process. The child is started once with
// `/bin/sh -c <command>` and kept alive for the lifetime of the oracle.
//
// Protocol (JSON lines):
//   request   one line per pair: {"left": <instance>, "right": <instance>}
//   response  one line per request line, in order: a bare number or
//             {"distance": <number>}
// Requests are sent in batches of at most `batch_size` lines; the batch is
// flushed before any response is read.
class CommandOracle : public DistanceOracle {
 public:
  static constexpr std::size_t kDefaultBatchSize = 256;

  explicit CommandOracle(std::string command,
                         std::size_t batch_size = kDefaultBatchSize,
                         bool symmetric = false, bool concurrency_safe = false);
  ~CommandOracle() override;

  CommandOracle(const CommandOracle&) = delete;
  CommandOracle& operator=(const CommandOracle&) = delete;

  double distance(const Instance& a, const Instance& b) override;
  std::vector<double> distances(std::span<const InstancePair> pairs) override;

  bool symmetric() const override { return symmetric_; }
  bool concurrency_safe() const override { return concurrency_safe_; }

  // Sends a single probe pair and checks that a finite distance comes back.
  // Throws OracleError otherwise.
  void handshake(const InstancePair& probe);

  std::uint64_t round_trips() const { return round_trips_; }
  const std::string& command() const { return command_; }

 private:
  std::vector<double> exchange(std::span<const InstancePair> batch);
  void shutdown();

  std::string command_;
  std::size_t batch_size_;
  bool symmetric_;
  bool concurrency_safe_;
  pid_t child_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
  std::uint64_t round_trips_ = 0;
};

}  // namespace simexplain

#endif  // SIMEXPLAIN_COMMAND_ORACLE_H_
