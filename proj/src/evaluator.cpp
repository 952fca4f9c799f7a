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

#include "resnas/evaluator.hpp"

#include <algorithm>
#include <cmath>

#include "resnas/text.hpp"

namespace resnas {

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

std::string_view to_string(EvalStatus s) {
  switch (s) {
    case EvalStatus::Ok: return "ok";
    case EvalStatus::Infeasible: return "infeasible";
    case EvalStatus::Failed: return "failed";
  }
  return "?";
}

EvalStatus parse_eval_status(std::string_view text) {
  if (text == "ok") return EvalStatus::Ok;
  if (text == "infeasible") return EvalStatus::Infeasible;
  if (text == "failed") return EvalStatus::Failed;
  throw ParseError("unknown evaluation status '" + std::string(text) + "'");
}

std::vector<std::string> PenaltyWeights::problems() const {
  std::vector<std::string> out;
  for (double w : {w_hd95, w_params, w_flops}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      out.emplace_back("penalty weights must be finite and >= 0");
      break;
    }
  }
  if (!positive_finite(hd95_ref) || !positive_finite(params_ref) || !positive_finite(flops_ref))
    out.emplace_back("penalty reference scales must be finite and > 0");
  return out;
}

double scalar_fitness(const FitnessRecord& r, const PenaltyWeights& w) {
  return r.dsc_avg - w.w_hd95 * (r.hd95_avg / w.hd95_ref) -
         w.w_params * (static_cast<double>(r.params) / w.params_ref) -
         w.w_flops * (static_cast<double>(r.flops) / w.flops_ref);
}

std::vector<std::string> ProxyBudget::problems() const {
  std::vector<std::string> out;
  if (max_epochs < 1) out.emplace_back("proxy.max_epochs must be >= 1");
  if (early_stop_patience < 1) out.emplace_back("proxy.early_stop_patience must be >= 1");
  if (max_train_seconds < 1) out.emplace_back("proxy.max_train_seconds must be >= 1");
  return out;
}

double SurrogateModel::quality(const Genotype& g) {
  double q = 0.70;
  q += 0.10 * (g.filter_base - 32) / 95.0;
  q += 0.06 * (g.num_stages - 2) / 2.0;
  if (g.attention == Attention::SelfAttention) q += 0.04;
  switch (g.fusion) {
    case Fusion::Add: break;
    case Fusion::Concat: q += 0.01; break;
    case Fusion::WeightedSum: q += 0.03; break;
  }
  switch (g.activation) {
    case Activation::ReLU: q += 0.01; break;
    case Activation::ELU: q += 0.015; break;
    case Activation::Tanh: q += 0.005; break;
    case Activation::Sigmoid: q += 0.03; break;
  }
  q -= 0.004 * std::abs(g.kernel_size - 3);
  q -= 0.05 * (g.dropout_rate - 0.3) * (g.dropout_rate - 0.3);
  q -= 0.05 * (g.residual_scale - 0.4) * (g.residual_scale - 0.4);
  return q;
}

double SurrogateModel::noise(const Genotype& g, int stream) {
  std::string key = std::to_string(stream) + "|" + std::to_string(g.kernel_size) + "|" +
                    format_real(g.dropout_rate) + "|" + std::string(to_string(g.attention)) + "|" +
                    std::string(to_string(g.fusion)) + "|" + std::string(to_string(g.activation)) +
                    "|" + format_real(g.residual_scale);
  const std::uint64_t h = fnv1a(key);
  return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

FitnessRecord surrogate_evaluate(const Genotype& g, const PlannerConfig& planner) {
  const ArchitecturePlan plan = build_plan(g, planner);
  const double quality = SurrogateModel::quality(g);
  FitnessRecord r;
  r.status = EvalStatus::Ok;
  r.params = plan.total_params;
  r.flops = plan.total_flops;
  r.dsc_avg = std::clamp(quality + 0.005 * SurrogateModel::noise(g, 1), 0.0, 1.0);
  r.hd95_avg = std::max(0.1, 2.0 + 40.0 * (1.0 - quality) + 0.1 * SurrogateModel::noise(g, 2));
  r.eval_cost_seconds = 30.0 + 2.0 * static_cast<double>(plan.total_flops) / 1e9;
  r.scalar_fitness = r.dsc_avg;
  return r;
}

std::vector<FitnessRecord> SurrogateEvaluator::evaluate(std::span<const EvalRequest> requests) {
  std::vector<FitnessRecord> out;
  out.reserve(requests.size());
  for (const auto& req : requests) out.push_back(surrogate_evaluate(req.genotype, planner_));
  return out;
}

}  // namespace resnas
