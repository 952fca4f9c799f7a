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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "resnas/evaluator.hpp"
#include "resnas/ledger.hpp"
#include "resnas/planner.hpp"
#include "resnas/random.hpp"
#include "resnas/search_space.hpp"
#include "resnas/variation.hpp"

namespace resnas {

enum class EvaluatorKind : std::uint8_t { Surrogate, External };
std::string_view to_string(EvaluatorKind kind);
EvaluatorKind parse_evaluator_kind(std::string_view text);

struct SearchConfig {
  int population_size = 10;  // M
  int generations = 20;      // T
  int tournament_size = 2;   // k
  std::uint64_t seed = 7;
  ResourceBudget budget;
  ProxyBudget proxy;
  PenaltyWeights penalty;
  EvaluatorKind evaluator = EvaluatorKind::Surrogate;
  std::string worker_command;
  int pool_size = 1;
  double handshake_timeout_seconds = 30.0;
  VariationConfig variation;  // crossover and mutation rates live here
  PlannerConfig planner;
  SearchSpace space;

  std::vector<std::string> problems() const;
};

/// One evaluated genotype. ids are assigned in evaluation order from 0.
struct Candidate {
  std::uint64_t id = 0;
  int generation = 0;
  Genotype genotype;
  FitnessRecord record;
};

/// Total order used by selection and replacement: higher scalar fitness, then
/// fewer params, then smaller serialized genotype, then smaller id.
bool ranks_before(const Candidate& a, const Candidate& b);

/// Pareto dominance over (-dsc, hd95, params, flops), all minimized.
bool dominates(const FitnessRecord& a, const FitnessRecord& b);

/// Non-dominated set of successfully evaluated candidates, keyed by genotype.
class ParetoArchive {
 public:
  /// Adds c unless it is not Ok, is dominated, or its genotype is already
  /// present. Members c dominates are removed. Returns whether c was added.
  bool insert(const Candidate& c);
  const std::vector<Candidate>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

 private:
  std::vector<Candidate> members_;
};

struct SearchState {
  int generation = 0;
  std::vector<Candidate> population;
  ParetoArchive archive;
  std::optional<Candidate> best;
  BudgetLedger ledger;
  std::vector<Candidate> history;  // every evaluation, in order
  std::vector<std::string> log;
  std::uint64_t next_id = 0;
};

/// Builds the evaluator selected by cfg. External evaluators are started
/// before returning and throw WorkerSpawnError on failure.
std::unique_ptr<Evaluator> make_evaluator(const SearchConfig& cfg);

/// Samples and evaluates M genotypes (generation 0).
SearchState initialize(const SearchConfig& cfg, Evaluator& evaluator);

/// k draws with replacement from the population; the best by ranks_before wins.
const Candidate& tournament_select(const std::vector<Candidate>& population, int k, RandomSource& rng);

/// Top M of the union under ranks_before.
std::vector<Candidate> elitist_replace(const std::vector<Candidate>& population,
                                       const std::vector<Candidate>& offspring, int m);

/// One generation: 2M tournament picks with the generation stream, offspring i
/// from picks 2i and 2i+1 with its own stream, budget gate, evaluation, merge.
void step_generation(SearchState& state, const SearchConfig& cfg, Evaluator& evaluator);

/// initialize followed by T generations; M*(T+1) evaluations in total.
SearchState run(const SearchConfig& cfg, Evaluator& evaluator);

/// Evaluates genotypes outside a search (budget gate, planner counts,
/// scalar fitness) without touching any state.
std::vector<FitnessRecord> evaluate_genotypes(const std::vector<Genotype>& genotypes, const SearchConfig& cfg,
                                              Evaluator& evaluator);

// History: one JSON object per line,
//   {"generation":g,"genotype":{...},"id":n,"record":{...}}
std::string history_line(const Candidate& c);
std::string format_history(const std::vector<Candidate>& history);
/// Blank lines are skipped. Throws ParseError with the line number.
std::vector<Candidate> parse_history(std::string_view text);

/// Plain-text report: best candidate, evaluation counts, archive, ledger.
std::string format_summary(const SearchState& state, const SearchConfig& cfg);

}  // namespace resnas
