// Copyright 2026 The resnas Authors.
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

// External evaluation through worker processes speaking the protocol in
// protocol.hpp. POSIX only.

#pragma once

#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>
#include <sys/types.h>
#include <vector>

#include "resnas/evaluator.hpp"
#include "resnas/planner.hpp"
#include "resnas/protocol.hpp"

namespace resnas {

/// The worker could not be started or did not complete the handshake.
class WorkerSpawnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A child process run as `/bin/sh -c <command>` in its own process group,
/// with stdin and stdout connected to pipes. stderr is inherited.
class WorkerProcess {
 public:
  using Clock = std::chrono::steady_clock;

  enum class ReadStatus { Line, Timeout, Closed };
  struct ReadResult {
    ReadStatus status = ReadStatus::Closed;
    std::string line;
  };

  explicit WorkerProcess(const std::string& command);
  ~WorkerProcess();
  WorkerProcess(const WorkerProcess&) = delete;
  WorkerProcess& operator=(const WorkerProcess&) = delete;

  /// Writes text plus a newline. False if the pipe is closed.
  bool write_line(const std::string& text);
  /// Next newline-terminated line, without the terminator.
  ReadResult read_line(Clock::time_point deadline);
  /// Kills the whole process group and reaps the child. Idempotent.
  void terminate();
  pid_t pid() const { return pid_; }

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  bool eof_ = false;
};

struct WorkerConfig {
  std::string command;
  ProxyBudget budget;
  double handshake_timeout_seconds = 30.0;
  /// Relative tolerance before a params/flops mismatch with the planner is logged.
  double count_tolerance = 0.01;
  PlannerConfig planner;
};

/// One worker connection. Timeouts, stream closure and protocol violations
/// fail the candidate and restart the worker; an error message fails the
/// candidate and keeps the worker.
class WorkerClient {
 public:
  explicit WorkerClient(WorkerConfig config) : config_(std::move(config)) {}

  /// Spawns the worker and checks the handshake. Throws WorkerSpawnError.
  void start();
  FitnessRecord evaluate(const EvalRequest& request, std::vector<std::string>& log);
  /// Number of times a worker process has been spawned.
  int spawn_count() const { return spawns_; }

 private:
  FitnessRecord fail(const EvalRequest& request, std::string reason, bool restart,
                     WorkerProcess::Clock::time_point started);

  WorkerConfig config_;
  std::unique_ptr<WorkerProcess> process_;
  int spawns_ = 0;
};

/// Pool of WorkerClients. Requests are spread over the pool; results and log
/// lines come back in request order regardless of completion order.
class ExternalEvaluator final : public Evaluator {
 public:
  ExternalEvaluator(WorkerConfig config, int pool_size);

  /// Spawns every worker up front. Throws WorkerSpawnError.
  void start();
  std::vector<FitnessRecord> evaluate(std::span<const EvalRequest> requests) override;
  std::vector<std::string> drain_log() override;

 private:
  std::vector<std::unique_ptr<WorkerClient>> clients_;
  std::vector<std::string> log_;
};

/// Converts a validated result message to a record: planner counts replace
/// the worker's, and mismatches beyond `tolerance` are appended to `log`.
FitnessRecord record_from_result(const EvalRequest& request, const ResultMessage& result,
                                 const PlannerConfig& planner, double tolerance,
                                 std::vector<std::string>& log);

}  // namespace resnas
