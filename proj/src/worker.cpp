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

#include "resnas/worker.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <mutex>
#include <poll.h>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>
#include <utility>

#include "resnas/text.hpp"

namespace resnas {

namespace {

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

std::chrono::steady_clock::duration seconds(double s) {
  return std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(s));
}

double elapsed_since(WorkerProcess::Clock::time_point t0) {
  return std::chrono::duration<double>(WorkerProcess::Clock::now() - t0).count();
}

std::string describe_mismatch(std::uint64_t id, const char* what, std::uint64_t worker, std::uint64_t planner) {
  const double rel = planner == 0 ? INFINITY
                                  : std::abs(static_cast<double>(worker) - static_cast<double>(planner)) /
                                        static_cast<double>(planner);
  return "candidate " + std::to_string(id) + ": worker " + what + " " + std::to_string(worker) + " vs planner " +
         std::to_string(planner) + " (relative difference " + format_real(rel) + "); planner count kept";
}

bool beyond(std::uint64_t worker, std::uint64_t planner, double tolerance) {
  if (planner == 0) return worker != 0;
  return std::abs(static_cast<double>(worker) - static_cast<double>(planner)) / static_cast<double>(planner) >
         tolerance;
}

}  // namespace

WorkerProcess::WorkerProcess(const std::string& command) {
  ignore_sigpipe();
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw WorkerSpawnError(std::string("pipe: ") + std::strerror(errno));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw WorkerSpawnError(std::string("pipe: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw WorkerSpawnError(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

WorkerProcess::~WorkerProcess() { terminate(); }

bool WorkerProcess::write_line(const std::string& text) {
  if (to_child_ < 0) return false;
  std::string data = text;
  data.push_back('\n');
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

WorkerProcess::ReadResult WorkerProcess::read_line(Clock::time_point deadline) {
  while (true) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      ReadResult r{ReadStatus::Line, buffer_.substr(0, nl)};
      buffer_.erase(0, nl + 1);
      if (!r.line.empty() && r.line.back() == '\r') r.line.pop_back();
      return r;
    }
    if (eof_ || from_child_ < 0) return {ReadStatus::Closed, {}};
    const auto now = Clock::now();
    if (now >= deadline) return {ReadStatus::Timeout, {}};
    const auto wait_ms = std::chrono::ceil<std::chrono::milliseconds>(deadline - now).count();
    pollfd p{from_child_, POLLIN, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(std::min<long long>(wait_ms, 1000 * 60 * 60)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      eof_ = true;
      continue;
    }
    if (rc == 0) continue;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      eof_ = true;
    } else if (n == 0) {
      eof_ = true;
    } else {
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }
}

void WorkerProcess::terminate() {
  close_fd(to_child_);
  close_fd(from_child_);
  if (pid_ > 0) {
    ::kill(-pid_, SIGKILL);
    ::kill(pid_, SIGKILL);
    int status = 0;
    while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
    pid_ = -1;
  }
}

FitnessRecord record_from_result(const EvalRequest& request, const ResultMessage& result,
                                 const PlannerConfig& planner, double tolerance, std::vector<std::string>& log) {
  const ArchitecturePlan plan = build_plan(request.genotype, planner);
  if (beyond(result.params, plan.total_params, tolerance))
    log.push_back(describe_mismatch(request.id, "params", result.params, plan.total_params));
  if (beyond(result.flops, plan.total_flops, tolerance))
    log.push_back(describe_mismatch(request.id, "flops", result.flops, plan.total_flops));
  FitnessRecord r;
  r.status = EvalStatus::Ok;
  r.dsc_avg = result.dsc_avg;
  r.hd95_avg = result.hd95_avg;
  r.params = plan.total_params;
  r.flops = plan.total_flops;
  r.eval_cost_seconds = result.eval_cost_seconds;
  r.per_class = result.per_class;
  r.curve = result.curve;
  r.scalar_fitness = r.dsc_avg;
  return r;
}

void WorkerClient::start() {
  process_.reset();
  auto proc = std::make_unique<WorkerProcess>(config_.command);
  ++spawns_;
  const auto deadline = WorkerProcess::Clock::now() + seconds(config_.handshake_timeout_seconds);
  const auto line = proc->read_line(deadline);
  if (line.status == WorkerProcess::ReadStatus::Timeout)
    throw WorkerSpawnError("worker '" + config_.command + "' sent no handshake in time");
  if (line.status == WorkerProcess::ReadStatus::Closed)
    throw WorkerSpawnError("worker '" + config_.command + "' exited before the handshake");
  WorkerMessage msg;
  try {
    msg = parse_worker_message(line.line);
  } catch (const ProtocolError& e) {
    throw WorkerSpawnError("worker handshake: " + std::string(e.what()));
  }
  const auto* ready = std::get_if<ReadyMessage>(&msg);
  if (ready == nullptr) throw WorkerSpawnError("worker handshake: expected a ready message");
  if (ready->protocol_version != kProtocolVersion) {
    throw WorkerSpawnError("worker speaks protocol version " + std::to_string(ready->protocol_version) +
                           ", engine requires " + std::to_string(kProtocolVersion));
  }
  process_ = std::move(proc);
}

FitnessRecord WorkerClient::fail(const EvalRequest& request, std::string reason, bool restart,
                                 WorkerProcess::Clock::time_point started) {
  if (restart) process_.reset();
  FitnessRecord r;
  r.status = EvalStatus::Failed;
  r.failure = "candidate " + std::to_string(request.id) + ": " + reason;
  r.eval_cost_seconds = elapsed_since(started);
  r.scalar_fitness = kFailedFitness;
  return r;
}

FitnessRecord WorkerClient::evaluate(const EvalRequest& request, std::vector<std::string>& log) {
  const auto started = WorkerProcess::Clock::now();
  if (!process_) {
    try {
      start();
    } catch (const WorkerSpawnError& e) {
      auto r = fail(request, std::string("worker restart failed: ") + e.what(), true, started);
      log.push_back(r.failure);
      return r;
    }
  }
  auto failed = [&](std::string reason, bool restart) {
    auto r = fail(request, std::move(reason), restart, started);
    log.push_back(r.failure);
    return r;
  };
  if (!process_->write_line(encode_evaluate(request, config_.budget))) return failed("worker crashed (stdin closed)", true);

  const auto deadline = started + seconds(config_.budget.max_train_seconds);
  const auto line = process_->read_line(deadline);
  if (line.status == WorkerProcess::ReadStatus::Timeout) {
    return failed("timeout after " + std::to_string(config_.budget.max_train_seconds) + " s", true);
  }
  if (line.status == WorkerProcess::ReadStatus::Closed) return failed("worker crashed (stdout closed)", true);

  WorkerMessage msg;
  try {
    msg = parse_worker_message(line.line);
  } catch (const ProtocolError& e) {
    return failed(std::string("protocol error: ") + e.what(), true);
  }
  if (const auto* err = std::get_if<ErrorMessage>(&msg)) {
    if (err->id != request.id) return failed("protocol error: error message for id " + std::to_string(err->id), true);
    return failed("worker error: " + err->message, false);
  }
  const auto* result = std::get_if<ResultMessage>(&msg);
  if (result == nullptr) return failed("protocol error: unexpected ready message", true);
  if (result->id != request.id)
    return failed("protocol error: result for id " + std::to_string(result->id), true);
  return record_from_result(request, *result, config_.planner, config_.count_tolerance, log);
}

ExternalEvaluator::ExternalEvaluator(WorkerConfig config, int pool_size) {
  const int n = std::max(1, pool_size);
  for (int i = 0; i < n; ++i) clients_.push_back(std::make_unique<WorkerClient>(config));
}

void ExternalEvaluator::start() {
  for (auto& c : clients_) c->start();
}

std::vector<FitnessRecord> ExternalEvaluator::evaluate(std::span<const EvalRequest> requests) {
  std::vector<FitnessRecord> results(requests.size());
  std::vector<std::vector<std::string>> logs(requests.size());
  std::atomic<std::size_t> next{0};
  auto drain = [&](WorkerClient& client) {
    for (std::size_t i = next++; i < requests.size(); i = next++) results[i] = client.evaluate(requests[i], logs[i]);
  };
  const std::size_t workers = std::min(clients_.size(), requests.size());
  if (workers <= 1) {
    if (!requests.empty()) drain(*clients_.front());
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(drain, std::ref(*clients_[w]));
    for (auto& t : threads) t.join();
  }
  for (auto& l : logs) log_.insert(log_.end(), std::make_move_iterator(l.begin()), std::make_move_iterator(l.end()));
  return results;
}

std::vector<std::string> ExternalEvaluator::drain_log() { return std::exchange(log_, {}); }

}  // namespace resnas
