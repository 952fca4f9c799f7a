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

// Evaluation worker protocol, version 1: one JSON object per line over the
// worker's stdin (engine -> worker) and stdout (worker -> engine).
//
//   worker, once at start:  {"type":"ready","protocol_version":1}
//   engine:  {"type":"evaluate","id":N,"genotype":{...},"budget":{"max_epochs":E,
//             "early_stop_patience":P,"max_train_seconds":S},"parent_hint":{...}|null,"seed":N}
//   worker:  {"type":"result","id":N,"dsc_avg":x,"hd95_avg":x,"per_class":{"lv":x,"myo":x,"rv":x},
//             "params":N,"flops":N,"eval_cost_seconds":x,"curve":[{"epoch":N,"dsc":x,"hd95":x},...]}
//        or {"type":"error","id":N,"message":"..."}

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "resnas/evaluator.hpp"

namespace resnas {

inline constexpr int kProtocolVersion = 1;

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReadyMessage {
  int protocol_version = kProtocolVersion;
};

struct ResultMessage {
  std::uint64_t id = 0;
  double dsc_avg = 0.0;
  double hd95_avg = 0.0;
  std::optional<PerClassScores> per_class;
  std::uint64_t params = 0;
  std::uint64_t flops = 0;
  double eval_cost_seconds = 0.0;
  std::vector<CurvePoint> curve;
};

struct ErrorMessage {
  std::uint64_t id = 0;
  std::string message;
};

using WorkerMessage = std::variant<ReadyMessage, ResultMessage, ErrorMessage>;

struct EvaluateMessage {
  EvalRequest request;
  ProxyBudget budget;
};

// Engine side.
std::string encode_evaluate(const EvalRequest& request, const ProxyBudget& budget);
/// Parses and range-checks a worker line (dsc in [0,1], hd95 >= 0, cost >= 0).
/// Throws ProtocolError.
WorkerMessage parse_worker_message(std::string_view line);

// Worker side.
std::string encode_ready(int protocol_version = kProtocolVersion);
std::string encode_result(const ResultMessage& result);
std::string encode_error(std::uint64_t id, std::string_view message);
EvaluateMessage parse_evaluate_message(std::string_view line);

}  // namespace resnas
