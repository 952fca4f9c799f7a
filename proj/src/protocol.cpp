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

#include "resnas/protocol.hpp"

#include <cmath>

#include "resnas/codec.hpp"
#include "resnas/text.hpp"

namespace resnas {

using nlohmann::json;

namespace {

json parse_line(std::string_view line) {
  json j = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ProtocolError("malformed JSON line");
  if (!j.is_object()) throw ProtocolError("message must be a JSON object");
  return j;
}

const json& need(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ProtocolError(std::string("missing field '") + key + "'");
  return *it;
}

std::uint64_t need_uint(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_unsigned()) throw ProtocolError(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

double need_real(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number()) throw ProtocolError(std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ProtocolError(std::string("field '") + key + "' must be finite");
  return d;
}

void require_range(double v, double lo, double hi, const char* what) {
  if (!(v >= lo && v <= hi)) {
    throw ProtocolError(std::string(what) + " " + format_real(v) + " outside [" + format_real(lo) + "," +
                        format_real(hi) + "]");
  }
}

}  // namespace

std::string encode_evaluate(const EvalRequest& request, const ProxyBudget& budget) {
  json j = json::object();
  j["type"] = "evaluate";
  j["id"] = request.id;
  j["genotype"] = genotype_to_json(request.genotype);
  j["budget"] = {{"max_epochs", budget.max_epochs},
                 {"early_stop_patience", budget.early_stop_patience},
                 {"max_train_seconds", budget.max_train_seconds}};
  j["parent_hint"] = request.parent_hint ? genotype_to_json(*request.parent_hint) : json(nullptr);
  j["seed"] = request.seed;
  return j.dump();
}

WorkerMessage parse_worker_message(std::string_view line) {
  const json j = parse_line(line);
  const json& type = need(j, "type");
  if (!type.is_string()) throw ProtocolError("field 'type' must be a string");
  const auto kind = type.get<std::string>();
  if (kind == "ready") {
    const json& v = need(j, "protocol_version");
    if (!v.is_number_integer()) throw ProtocolError("protocol_version must be an integer");
    return ReadyMessage{v.get<int>()};
  }
  if (kind == "error") {
    ErrorMessage e;
    e.id = need_uint(j, "id");
    const json& msg = need(j, "message");
    if (!msg.is_string()) throw ProtocolError("field 'message' must be a string");
    e.message = msg.get<std::string>();
    return e;
  }
  if (kind != "result") throw ProtocolError("unknown message type '" + kind + "'");

  ResultMessage r;
  r.id = need_uint(j, "id");
  r.dsc_avg = need_real(j, "dsc_avg");
  require_range(r.dsc_avg, 0.0, 1.0, "dsc_avg");
  r.hd95_avg = need_real(j, "hd95_avg");
  require_range(r.hd95_avg, 0.0, INFINITY, "hd95_avg");
  r.params = need_uint(j, "params");
  r.flops = need_uint(j, "flops");
  r.eval_cost_seconds = need_real(j, "eval_cost_seconds");
  require_range(r.eval_cost_seconds, 0.0, INFINITY, "eval_cost_seconds");
  try {
    if (const auto it = j.find("per_class"); it != j.end() && !it->is_null()) {
      r.per_class = per_class_from_json(*it);
      require_range(r.per_class->lv, 0.0, 1.0, "per_class.lv");
      require_range(r.per_class->myo, 0.0, 1.0, "per_class.myo");
      require_range(r.per_class->rv, 0.0, 1.0, "per_class.rv");
    }
    if (const auto it = j.find("curve"); it != j.end() && !it->is_null()) {
      r.curve = curve_from_json(*it);
      for (const auto& p : r.curve) {
        require_range(p.dsc, 0.0, 1.0, "curve.dsc");
        require_range(p.hd95, 0.0, INFINITY, "curve.hd95");
      }
    }
  } catch (const ParseError& e) {
    throw ProtocolError(e.what());
  }
  return r;
}

std::string encode_ready(int protocol_version) {
  return json{{"type", "ready"}, {"protocol_version", protocol_version}}.dump();
}

std::string encode_result(const ResultMessage& r) {
  json j = json::object();
  j["type"] = "result";
  j["id"] = r.id;
  j["dsc_avg"] = r.dsc_avg;
  j["hd95_avg"] = r.hd95_avg;
  j["per_class"] = r.per_class ? per_class_to_json(*r.per_class) : json(nullptr);
  j["params"] = r.params;
  j["flops"] = r.flops;
  j["eval_cost_seconds"] = r.eval_cost_seconds;
  j["curve"] = curve_to_json(r.curve);
  return j.dump();
}

std::string encode_error(std::uint64_t id, std::string_view message) {
  return json{{"type", "error"}, {"id", id}, {"message", std::string(message)}}.dump();
}

EvaluateMessage parse_evaluate_message(std::string_view line) {
  const json j = parse_line(line);
  const json& type = need(j, "type");
  if (!type.is_string() || type.get<std::string>() != "evaluate") throw ProtocolError("expected an evaluate message");
  EvaluateMessage m;
  m.request.id = need_uint(j, "id");
  m.request.seed = need_uint(j, "seed");
  try {
    m.request.genotype = genotype_from_json(need(j, "genotype"));
    const json& hint = need(j, "parent_hint");
    if (!hint.is_null()) m.request.parent_hint = genotype_from_json(hint);
  } catch (const ParseError& e) {
    throw ProtocolError(e.what());
  }
  const json& budget = need(j, "budget");
  if (!budget.is_object()) throw ProtocolError("budget must be an object");
  auto small = [&](const char* key) {
    const auto v = need_uint(budget, key);
    if (v > 1'000'000'000) throw ProtocolError(std::string(key) + " out of range");
    return static_cast<int>(v);
  };
  m.budget.max_epochs = small("max_epochs");
  m.budget.early_stop_patience = small("early_stop_patience");
  m.budget.max_train_seconds = small("max_train_seconds");
  return m;
}

}  // namespace resnas
