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

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "resnas/planner.hpp"
#include "resnas/search_space.hpp"

namespace resnas {

inline constexpr double kFailedFitness = -std::numeric_limits<double>::infinity();

enum class EvalStatus : std::uint8_t { Ok, Infeasible, Failed };
std::string_view to_string(EvalStatus s);
EvalStatus parse_eval_status(std::string_view text);

struct CurvePoint {
  int epoch = 0;
  double dsc = 0.0;
  double hd95 = 0.0;
  bool operator==(const CurvePoint&) const = default;
};

struct PerClassScores {
  double lv = 0.0;
  double myo = 0.0;
  double rv = 0.0;
  bool operator==(const PerClassScores&) const = default;
};

/// Outcome of evaluating one candidate. Only Ok records carry meaningful
/// metrics; Infeasible and Failed records hold kFailedFitness.
struct FitnessRecord {
  EvalStatus status = EvalStatus::Ok;
  double dsc_avg = 0.0;   // [0, 1]
  double hd95_avg = 0.0;  // mm (or px at unit spacing)
  std::uint64_t params = 0;
  std::uint64_t flops = 0;
  double eval_cost_seconds = 0.0;
  Feasibility feasibility;
  double scalar_fitness = kFailedFitness;
  std::string failure;
  std::optional<PerClassScores> per_class;
  std::vector<CurvePoint> curve;

  bool ok() const { return status == EvalStatus::Ok; }
  bool operator==(const FitnessRecord&) const = default;
};

/// Linear complexity-penalized Dice:
///   dsc - w_hd95*hd95/hd95_ref - w_params*params/params_ref - w_flops*flops/flops_ref
struct PenaltyWeights {
  double w_hd95 = 0.1;
  double w_params = 0.1;
  double w_flops = 0.1;
  double hd95_ref = 10.0;
  double params_ref = 3.58e6;
  double flops_ref = 14.56e9;

  std::vector<std::string> problems() const;
};

double scalar_fitness(const FitnessRecord& r, const PenaltyWeights& w);

struct ProxyBudget {
  int max_epochs = 5;
  int early_stop_patience = 2;
  int max_train_seconds = 600;

  std::vector<std::string> problems() const;
};

/// Deterministic stand-in for proxy training. With e = encode_numeric(g):
///
///   quality = 0.70
///           + 0.10 * (f_l - 32) / 95 + 0.06 * (n_s - 2) / 2
///           + 0.04 * [self-attention]
///           + {add 0, concat 0.01, weighted sum 0.03}
///           + {relu 0.01, elu 0.015, tanh 0.005, sigmoid 0.03}
///           - 0.004 * |k_n - 3|
///           - 0.05 * (d_p - 0.3)^2 - 0.05 * (alpha - 0.4)^2
///   dsc_avg  = clamp(quality + 0.005 * u1, 0, 1)
///   hd95_avg = max(0.1, 2 + 40 * (1 - quality) + 0.1 * u2)
///   eval_cost_seconds = 30 + 2 * flops / 1e9   (notional proxy-training time)
///
/// u1, u2 in [-1, 1] come from an FNV-1a hash of the genes other than f_l and
/// n_s, so sweeps over those two genes see a constant noise term and dsc is
/// nondecreasing in both. Every categorical bonus gap exceeds the 0.01 noise
/// span, so preferred choices win for otherwise identical genotypes.
struct SurrogateModel {
  static double quality(const Genotype& g);
  static double noise(const Genotype& g, int stream);
};

FitnessRecord surrogate_evaluate(const Genotype& g, const PlannerConfig& planner = {});

struct EvalRequest {
  std::uint64_t id = 0;
  Genotype genotype;
  std::optional<Genotype> parent_hint;
  std::uint64_t seed = 0;
};

/// Batch evaluation boundary. Implementations fill metrics, params/flops (from
/// the planner) and cost, and report faults as Failed records; they never throw
/// for per-candidate problems. results[i] answers requests[i].
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual std::vector<FitnessRecord> evaluate(std::span<const EvalRequest> requests) = 0;
  /// Diagnostic messages accumulated since the last call (discrepancies, faults).
  virtual std::vector<std::string> drain_log() { return {}; }
};

class SurrogateEvaluator final : public Evaluator {
 public:
  explicit SurrogateEvaluator(PlannerConfig planner = {}) : planner_(std::move(planner)) {}
  std::vector<FitnessRecord> evaluate(std::span<const EvalRequest> requests) override;

 private:
  PlannerConfig planner_;
};

}  // namespace resnas
