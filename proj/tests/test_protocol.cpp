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

#include <json.hpp>

#include "resnas/protocol.hpp"

namespace resnas {
namespace {

using nlohmann::json;

TEST(Protocol, EvaluateMessageShape) {
  EvalRequest req{17, reference_genotype(), std::nullopt, 99};
  const json j = json::parse(encode_evaluate(req, ProxyBudget{5, 2, 600}));
  EXPECT_EQ(j["type"], "evaluate");
  EXPECT_EQ(j["id"], 17);
  EXPECT_EQ(j["seed"], 99);
  EXPECT_TRUE(j["parent_hint"].is_null());
  EXPECT_EQ(j["budget"]["max_epochs"], 5);
  EXPECT_EQ(j["budget"]["early_stop_patience"], 2);
  EXPECT_EQ(j["budget"]["max_train_seconds"], 600);
  EXPECT_EQ(j["genotype"]["attention"], "self_attention");
  EXPECT_EQ(j["genotype"]["fusion"], "weighted_sum");
  EXPECT_EQ(j["genotype"].size(), 8u);
}

TEST(Protocol, EvaluateRoundTripWithHint) {
  Genotype hint = reference_genotype();
  hint.filter_base = 40;
  EvalRequest req{3, reference_genotype(), hint, 5};
  const EvaluateMessage m = parse_evaluate_message(encode_evaluate(req, ProxyBudget{1, 1, 30}));
  EXPECT_EQ(m.request.id, 3u);
  EXPECT_EQ(m.request.genotype, reference_genotype());
  ASSERT_TRUE(m.request.parent_hint.has_value());
  EXPECT_EQ(*m.request.parent_hint, hint);
  EXPECT_EQ(m.budget.max_train_seconds, 30);
}

TEST(Protocol, ReadyHandshake) {
  EXPECT_EQ(encode_ready(), R"({"protocol_version":1,"type":"ready"})");
  const auto msg = parse_worker_message(R"({"type":"ready","protocol_version":1})");
  ASSERT_TRUE(std::holds_alternative<ReadyMessage>(msg));
  EXPECT_EQ(std::get<ReadyMessage>(msg).protocol_version, 1);
}

TEST(Protocol, ResultRoundTrip) {
  ResultMessage r;
  r.id = 8;
  r.dsc_avg = 0.91;
  r.hd95_avg = 4.2;
  r.per_class = PerClassScores{0.95, 0.88, 0.9};
  r.params = 123;
  r.flops = 456;
  r.eval_cost_seconds = 77.76;
  r.curve = {{1, 0.5, 10}, {2, 0.91, 4.2}};
  const auto msg = parse_worker_message(encode_result(r));
  ASSERT_TRUE(std::holds_alternative<ResultMessage>(msg));
  const auto& back = std::get<ResultMessage>(msg);
  EXPECT_EQ(back.id, 8u);
  EXPECT_EQ(back.dsc_avg, 0.91);
  EXPECT_EQ(back.per_class, r.per_class);
  EXPECT_EQ(back.curve, r.curve);
  EXPECT_EQ(back.params, 123u);
}

TEST(Protocol, ErrorMessage) {
  const auto msg = parse_worker_message(encode_error(4, "out of memory"));
  ASSERT_TRUE(std::holds_alternative<ErrorMessage>(msg));
  EXPECT_EQ(std::get<ErrorMessage>(msg).id, 4u);
  EXPECT_EQ(std::get<ErrorMessage>(msg).message, "out of memory");
}

TEST(Protocol, RejectsViolations) {
  const std::string ok =
      R"({"type":"result","id":1,"dsc_avg":0.5,"hd95_avg":3,"params":1,"flops":1,"eval_cost_seconds":1})";
  EXPECT_NO_THROW(parse_worker_message(ok));
  for (const char* bad : {
           "not json",
           "[1,2]",
           R"({"id":1})",
           R"({"type":"banana"})",
           R"({"type":"result","id":1,"dsc_avg":1.7,"hd95_avg":3,"params":1,"flops":1,"eval_cost_seconds":1})",
           R"({"type":"result","id":1,"dsc_avg":0.5,"hd95_avg":-1,"params":1,"flops":1,"eval_cost_seconds":1})",
           R"({"type":"result","id":-1,"dsc_avg":0.5,"hd95_avg":3,"params":1,"flops":1,"eval_cost_seconds":1})",
           R"({"type":"result","id":1,"dsc_avg":0.5,"hd95_avg":3,"params":1.5,"flops":1,"eval_cost_seconds":1})",
           R"({"type":"result","id":1,"dsc_avg":"x","hd95_avg":3,"params":1,"flops":1,"eval_cost_seconds":1})",
           R"({"type":"result","id":1,"dsc_avg":0.5,"hd95_avg":3,"params":1,"flops":1})",
           R"({"type":"result","id":1,"dsc_avg":0.5,"hd95_avg":3,"params":1,"flops":1,"eval_cost_seconds":1,"per_class":{"lv":2,"myo":0,"rv":0}})",
           R"({"type":"result","id":1,"dsc_avg":0.5,"hd95_avg":3,"params":1,"flops":1,"eval_cost_seconds":1,"curve":[{"epoch":1}]})",
           R"({"type":"error","id":1})",
           R"({"type":"ready","protocol_version":"1"})",
       }) {
    EXPECT_THROW(parse_worker_message(bad), ProtocolError) << bad;
  }
}

TEST(Protocol, EvaluateParserRejectsBadGenes) {
  json j = json::parse(encode_evaluate({1, reference_genotype(), std::nullopt, 0}, ProxyBudget{}));
  j["genotype"]["activation"] = "swish";
  EXPECT_THROW(parse_evaluate_message(j.dump()), ProtocolError);
  j = json::parse(encode_evaluate({1, reference_genotype(), std::nullopt, 0}, ProxyBudget{}));
  j.erase("budget");
  EXPECT_THROW(parse_evaluate_message(j.dump()), ProtocolError);
  EXPECT_THROW(parse_evaluate_message(encode_ready()), ProtocolError);
}

}  // namespace
}  // namespace resnas
