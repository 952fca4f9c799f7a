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

#include "resnas/codec.hpp"

#include <cmath>

#include "resnas/text.hpp"

namespace resnas {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

double real_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::int64_t int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::uint64_t uint_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw ParseError(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

json genotype_to_json(const Genotype& g) {
  json j = json::object();
  j["filter_base"] = g.filter_base;
  j["kernel_size"] = g.kernel_size;
  j["num_stages"] = g.num_stages;
  j["dropout_rate"] = g.dropout_rate;
  j["attention"] = std::string(to_string(g.attention));
  j["fusion"] = std::string(to_string(g.fusion));
  j["activation"] = std::string(to_string(g.activation));
  j["residual_scale"] = g.residual_scale;
  return j;
}

Genotype genotype_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("genotype must be a JSON object");
  if (j.size() != kGeneCount) throw ParseError("genotype must have exactly 8 keys");
  auto small_int = [&](const char* key) {
    const auto v = int_field(j, key);
    if (v < -1'000'000'000 || v > 1'000'000'000) throw ParseError(std::string(key) + " out of range");
    return static_cast<int>(v);
  };
  Genotype g;
  g.filter_base = small_int("filter_base");
  g.kernel_size = small_int("kernel_size");
  g.num_stages = small_int("num_stages");
  g.dropout_rate = real_field(j, "dropout_rate");
  g.attention = parse_attention(string_field(j, "attention"));
  g.fusion = parse_fusion(string_field(j, "fusion"));
  g.activation = parse_activation(string_field(j, "activation"));
  g.residual_scale = real_field(j, "residual_scale");
  return g;
}

json curve_to_json(const std::vector<CurvePoint>& curve) {
  json arr = json::array();
  for (const auto& p : curve) arr.push_back({{"epoch", p.epoch}, {"dsc", p.dsc}, {"hd95", p.hd95}});
  return arr;
}

std::vector<CurvePoint> curve_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("curve must be an array");
  std::vector<CurvePoint> out;
  for (const auto& p : j) {
    if (!p.is_object()) throw ParseError("curve entries must be objects");
    const auto epoch = int_field(p, "epoch");
    if (epoch < 0 || epoch > 1'000'000) throw ParseError("curve epoch out of range");
    out.push_back({static_cast<int>(epoch), real_field(p, "dsc"), real_field(p, "hd95")});
  }
  return out;
}

json per_class_to_json(const PerClassScores& p) { return {{"lv", p.lv}, {"myo", p.myo}, {"rv", p.rv}}; }

PerClassScores per_class_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("per_class must be an object");
  return {real_field(j, "lv"), real_field(j, "myo"), real_field(j, "rv")};
}

json record_to_json(const FitnessRecord& r) {
  json j = json::object();
  j["status"] = std::string(to_string(r.status));
  j["dsc_avg"] = r.dsc_avg;
  j["hd95_avg"] = r.hd95_avg;
  j["params"] = r.params;
  j["flops"] = r.flops;
  j["eval_cost_seconds"] = r.eval_cost_seconds;
  j["feasible"] = r.feasibility.feasible;
  j["params_excess"] = r.feasibility.params_excess;
  j["flops_excess"] = r.feasibility.flops_excess;
  j["scalar_fitness"] = std::isfinite(r.scalar_fitness) ? json(r.scalar_fitness) : json(nullptr);
  j["failure"] = r.failure;
  j["per_class"] = r.per_class ? per_class_to_json(*r.per_class) : json(nullptr);
  j["curve"] = curve_to_json(r.curve);
  return j;
}

FitnessRecord record_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("record must be a JSON object");
  FitnessRecord r;
  r.status = parse_eval_status(string_field(j, "status"));
  r.dsc_avg = real_field(j, "dsc_avg");
  r.hd95_avg = real_field(j, "hd95_avg");
  r.params = uint_field(j, "params");
  r.flops = uint_field(j, "flops");
  r.eval_cost_seconds = real_field(j, "eval_cost_seconds");
  const json& feasible = field(j, "feasible");
  if (!feasible.is_boolean()) throw ParseError("field 'feasible' must be a boolean");
  r.feasibility.feasible = feasible.get<bool>();
  r.feasibility.params_excess = uint_field(j, "params_excess");
  r.feasibility.flops_excess = uint_field(j, "flops_excess");
  const json& fit = field(j, "scalar_fitness");
  r.scalar_fitness = fit.is_null() ? kFailedFitness : real_field(j, "scalar_fitness");
  r.failure = string_field(j, "failure");
  const json& per_class = field(j, "per_class");
  if (!per_class.is_null()) r.per_class = per_class_from_json(per_class);
  r.curve = curve_from_json(field(j, "curve"));
  return r;
}

}  // namespace resnas
