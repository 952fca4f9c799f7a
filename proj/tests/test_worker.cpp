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
#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <sstream>

#include "resnas/worker.hpp"
#include "test_support.hpp"

namespace resnas {
namespace {

using testing::scratch_dir;
using testing::stub_worker_command;

WorkerConfig config_for(const std::string& args, int max_seconds = 20) {
  WorkerConfig c;
  c.command = stub_worker_command(args);
  c.budget.max_train_seconds = max_seconds;
  c.handshake_timeout_seconds = 10;
  return c;
}

EvalRequest request(std::uint64_t id) {
  Genotype g = reference_genotype();
  g.filter_base = 32 + static_cast<int>(id % 90);
  return {id, g, std::nullopt, 1000 + id};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Worker, LoopbackUsesPlannerCounts) {
  WorkerClient client(config_for("--dsc 0.85 --hd95 4 --cost 7 --curve"));
  client.start();
  std::vector<std::string> log;
  const auto req = request(1);
  const FitnessRecord r = client.evaluate(req, log);
  ASSERT_TRUE(r.ok()) << r.failure;
  const auto plan = build_plan(req.genotype);
  EXPECT_EQ(r.params, plan.total_params);
  EXPECT_EQ(r.flops, plan.total_flops);
  EXPECT_EQ(r.dsc_avg, 0.85);
  EXPECT_EQ(r.hd95_avg, 4.0);
  EXPECT_EQ(r.eval_cost_seconds, 7.0);
  EXPECT_EQ(r.curve.size(), 3u);
  EXPECT_TRUE(log.empty());
  EXPECT_EQ(client.spawn_count(), 1);
}

TEST(Worker, CountDiscrepancyIsLogged) {
  WorkerClient client(config_for("--params-scale 1.5"));
  client.start();
  std::vector<std::string> log;
  const auto req = request(2);
  const FitnessRecord r = client.evaluate(req, log);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.params, build_plan(req.genotype).total_params);
  ASSERT_EQ(log.size(), 2u);
  EXPECT_NE(log[0].find("params"), std::string::npos);
  EXPECT_NE(log[1].find("flops"), std::string::npos);
}

TEST(Worker, RequestCarriesHintSeedAndBudget) {
  const auto dir = scratch_dir("worker_hint");
  const auto log_path = dir / "received.ndjson";
  WorkerClient client(config_for("--log '" + log_path.string() + "'"));
  client.start();
  std::vector<std::string> log;
  EvalRequest req = request(5);
  req.parent_hint = reference_genotype();
  ASSERT_TRUE(client.evaluate(req, log).ok());
  const EvaluateMessage m = parse_evaluate_message(slurp(log_path));
  EXPECT_EQ(m.request.id, 5u);
  EXPECT_EQ(m.request.seed, 1005u);
  ASSERT_TRUE(m.request.parent_hint.has_value());
  EXPECT_EQ(*m.request.parent_hint, reference_genotype());
  EXPECT_EQ(m.budget.max_train_seconds, 20);
  EXPECT_EQ(m.budget.max_epochs, 5);
}

TEST(Worker, OutOfRangeMetricFailsCandidate) {
  WorkerClient client(config_for("--out-of-range-id 3"));
  client.start();
  std::vector<std::string> log;
  const FitnessRecord r = client.evaluate(request(3), log);
  EXPECT_EQ(r.status, EvalStatus::Failed);
  EXPECT_NE(r.failure.find("dsc_avg"), std::string::npos);
  EXPECT_TRUE(client.evaluate(request(4), log).ok());
  EXPECT_EQ(client.spawn_count(), 2);
}

TEST(Worker, StallTimesOutAndRestarts) {
  WorkerClient client(config_for("--stall-id 1", 1));
  client.start();
  std::vector<std::string> log;
  const auto t0 = std::chrono::steady_clock::now();
  const FitnessRecord r = client.evaluate(request(1), log);
  const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(r.status, EvalStatus::Failed);
  EXPECT_NE(r.failure.find("timeout"), std::string::npos);
  EXPECT_LT(took, 5.0);
  EXPECT_GE(r.eval_cost_seconds, 0.9);
  EXPECT_TRUE(client.evaluate(request(2), log).ok());
  EXPECT_EQ(client.spawn_count(), 2);
}

TEST(Worker, CrashFailsCandidateAndRestarts) {
  WorkerClient client(config_for("--crash-id 1"));
  client.start();
  std::vector<std::string> log;
  const FitnessRecord r = client.evaluate(request(1), log);
  EXPECT_EQ(r.status, EvalStatus::Failed);
  EXPECT_NE(r.failure.find("crashed"), std::string::npos);
  EXPECT_EQ(log.size(), 1u);
  EXPECT_TRUE(client.evaluate(request(2), log).ok());
  EXPECT_EQ(client.spawn_count(), 2);
}

TEST(Worker, MalformedLineFailsCandidate) {
  WorkerClient client(config_for("--malformed-id 1"));
  client.start();
  std::vector<std::string> log;
  const FitnessRecord r = client.evaluate(request(1), log);
  EXPECT_EQ(r.status, EvalStatus::Failed);
  EXPECT_NE(r.failure.find("protocol error"), std::string::npos);
  EXPECT_TRUE(client.evaluate(request(2), log).ok());
}

TEST(Worker, WrongIdFailsCandidate) {
  WorkerClient client(config_for("--wrong-id 1"));
  client.start();
  std::vector<std::string> log;
  EXPECT_EQ(client.evaluate(request(1), log).status, EvalStatus::Failed);
  EXPECT_TRUE(client.evaluate(request(2), log).ok());
}

TEST(Worker, ErrorMessageKeepsWorker) {
  WorkerClient client(config_for("--error-id 1"));
  client.start();
  std::vector<std::string> log;
  const FitnessRecord r = client.evaluate(request(1), log);
  EXPECT_EQ(r.status, EvalStatus::Failed);
  EXPECT_NE(r.failure.find("simulated training failure"), std::string::npos);
  EXPECT_TRUE(client.evaluate(request(2), log).ok());
  EXPECT_EQ(client.spawn_count(), 1);
}

TEST(Worker, HandshakeFailures) {
  EXPECT_THROW(WorkerClient(config_for("--version 2")).start(), WorkerSpawnError);
  EXPECT_THROW(WorkerClient(config_for("--no-ready")).start(), WorkerSpawnError);
  EXPECT_THROW(WorkerClient(config_for("--garbage-ready")).start(), WorkerSpawnError);
  WorkerConfig missing;
  missing.command = "/nonexistent/resnas-worker";
  missing.handshake_timeout_seconds = 5;
  EXPECT_THROW(WorkerClient(missing).start(), WorkerSpawnError);
}

TEST(Worker, PoolPreservesRequestOrder) {
  ExternalEvaluator ev(config_for("--error-id 4 --params-scale 2"), 3);
  ev.start();
  std::vector<EvalRequest> reqs;
  for (std::uint64_t i = 0; i < 9; ++i) reqs.push_back(request(i));
  const auto out = ev.evaluate(reqs);
  ASSERT_EQ(out.size(), reqs.size());
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    if (i == 4) {
      EXPECT_EQ(out[i].status, EvalStatus::Failed);
      continue;
    }
    ASSERT_TRUE(out[i].ok());
    EXPECT_EQ(out[i].params, build_plan(reqs[i].genotype).total_params);
  }
  const auto log = ev.drain_log();
  ASSERT_EQ(log.size(), 17u);
  for (std::size_t i = 0, line = 0; i < reqs.size(); ++i) {
    const std::string tag = "candidate " + std::to_string(i) + ":";
    const std::size_t lines = i == 4 ? 1 : 2;
    for (std::size_t k = 0; k < lines; ++k, ++line) EXPECT_EQ(log[line].rfind(tag, 0), 0u) << log[line];
  }
  EXPECT_TRUE(ev.drain_log().empty());
}

}  // namespace
}  // namespace resnas
