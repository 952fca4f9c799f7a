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
#include "resnas/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "resnas/codec.hpp"
#include "resnas/text.hpp"
#include "resnas/worker.hpp"

namespace resnas {

using nlohmann::json;

namespace {

// Stream 0 of a generation drives sampling or tournament picks; stream i+1
// drives offspring i; request seeds use a disjoint offset.
constexpr std::uint64_t kRequestSeedOffset = 1ULL << 32;

bool metrics_in_range(const FitnessRecord& r) {
  return std::isfinite(r.dsc_avg) && r.dsc_avg >= 0.0 && r.dsc_avg <= 1.0 && std::isfinite(r.hd95_avg) &&
         r.hd95_avg >= 0.0 && std::isfinite(r.eval_cost_seconds) && r.eval_cost_seconds >= 0.0;
}

// Budget gate, evaluation of the feasible subset, planner recount, scoring.
std::vector<FitnessRecord> score(const std::vector<Genotype>& genotypes, const std::vector<std::uint64_t>& ids,
                                 const std::vector<std::optional<Genotype>>& hints, int generation,
                                 const SearchConfig& cfg, Evaluator& evaluator) {
  const std::size_t n = genotypes.size();
  std::vector<FitnessRecord> out(n);
  std::vector<ArchitecturePlan> plans;
  plans.reserve(n);
  std::vector<EvalRequest> requests;
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < n; ++i) {
    plans.push_back(build_plan(genotypes[i], cfg.planner));
    const Feasibility f = check_constraints(plans.back(), cfg.budget);
    if (!f.feasible) {
      FitnessRecord& r = out[i];
      r.status = EvalStatus::Infeasible;
      r.feasibility = f;
      r.failure = f.describe();
      r.scalar_fitness = kFailedFitness;
      continue;
    }
    requests.push_back({ids[i], genotypes[i], hints[i],
                        derive_seed(cfg.seed, static_cast<std::uint64_t>(generation), kRequestSeedOffset + i)});
    slots.push_back(i);
  }
  if (!requests.empty()) {
    std::vector<FitnessRecord> results = evaluator.evaluate(requests);
    for (std::size_t j = 0; j < slots.size(); ++j) {
      FitnessRecord r = j < results.size() ? std::move(results[j]) : FitnessRecord{};
      if (j >= results.size()) {
        r.status = EvalStatus::Failed;
        r.failure = "evaluator returned no result";
      }
      out[slots[j]] = std::move(r);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    FitnessRecord& r = out[i];
    r.params = plans[i].total_params;
    r.flops = plans[i].total_flops;
    if (r.status == EvalStatus::Infeasible) continue;
    r.feasibility = Feasibility{};
    if (r.ok() && !metrics_in_range(r)) {
      r.status = EvalStatus::Failed;
      r.failure = "evaluator returned metrics out of range";
    }
    if (!r.ok() && r.failure.empty()) r.failure = "evaluation failed";
    if (!std::isfinite(r.eval_cost_seconds) || r.eval_cost_seconds < 0.0) r.eval_cost_seconds = 0.0;
    r.scalar_fitness = r.ok() ? scalar_fitness(r, cfg.penalty) : kFailedFitness;
    if (!std::isfinite(r.scalar_fitness)) {
      r.status = EvalStatus::Failed;
      r.failure = "non-finite scalar fitness";
      r.scalar_fitness = kFailedFitness;
    }
  }
  return out;
}

std::vector<Candidate> evaluate_and_merge(SearchState& state, const SearchConfig& cfg, Evaluator& evaluator,
                                          const std::vector<Genotype>& genotypes,
                                          const std::vector<std::optional<Genotype>>& hints, int generation) {
  std::vector<std::uint64_t> ids;
  for (std::size_t i = 0; i < genotypes.size(); ++i) ids.push_back(state.next_id++);
  std::vector<FitnessRecord> records = score(genotypes, ids, hints, generation, cfg, evaluator);
  for (auto& line : evaluator.drain_log()) state.log.push_back(std::move(line));

  std::vector<Candidate> batch;
  batch.reserve(genotypes.size());
  for (std::size_t i = 0; i < genotypes.size(); ++i) {
    Candidate c{ids[i], generation, genotypes[i], std::move(records[i])};
    if (!c.record.ok()) state.log.push_back("generation " + std::to_string(generation) + ": " + c.record.failure);
    budget_ledger_update(state.ledger, generation, c.id, c.record);
    state.archive.insert(c);
    if (!state.best || c.record.scalar_fitness > state.best->record.scalar_fitness) state.best = c;
    state.history.push_back(c);
    batch.push_back(std::move(c));
  }
  return batch;
}

}  // namespace

std::string_view to_string(EvaluatorKind kind) {
  return kind == EvaluatorKind::Surrogate ? "surrogate" : "external";
}

EvaluatorKind parse_evaluator_kind(std::string_view text) {
  if (text == "surrogate") return EvaluatorKind::Surrogate;
  if (text == "external") return EvaluatorKind::External;
  throw ParseError("unknown evaluator '" + std::string(text) + "' (expected surrogate or external)");
}

std::vector<std::string> SearchConfig::problems() const {
  std::vector<std::string> out;
  if (population_size < 2) out.emplace_back("population_size ≥ 2 required (got " + std::to_string(population_size) + ")");
  if (generations < 1) out.emplace_back("generations ≥ 1 required (got " + std::to_string(generations) + ")");
  if (tournament_size < 1) out.emplace_back("tournament_size ≥ 1 required");
  if (tournament_size > population_size) out.emplace_back("tournament_size must not exceed population_size");
  if (pool_size < 1) out.emplace_back("pool_size ≥ 1 required");
  if (!(handshake_timeout_seconds > 0.0)) out.emplace_back("handshake_timeout_seconds must be > 0");
  auto append = [&](std::vector<std::string> more) { out.insert(out.end(), more.begin(), more.end()); };
  append(proxy.problems());
  append(penalty.problems());
  append(variation.problems());
  append(planner.problems());
  append(space.problems());
  return out;
}

bool ranks_before(const Candidate& a, const Candidate& b) {
  const double fa = a.record.scalar_fitness;
  const double fb = b.record.scalar_fitness;
  if (fa != fb) return fa > fb;
  if (a.record.params != b.record.params) return a.record.params < b.record.params;
  const std::string ra = to_record(a.genotype);
  const std::string rb = to_record(b.genotype);
  if (ra != rb) return ra < rb;
  return a.id < b.id;
}

bool dominates(const FitnessRecord& a, const FitnessRecord& b) {
  if (a.dsc_avg < b.dsc_avg || a.hd95_avg > b.hd95_avg || a.params > b.params || a.flops > b.flops) return false;
  return a.dsc_avg > b.dsc_avg || a.hd95_avg < b.hd95_avg || a.params < b.params || a.flops < b.flops;
}

bool ParetoArchive::insert(const Candidate& c) {
  if (!c.record.ok()) return false;
  for (const auto& m : members_)
    if (dominates(m.record, c.record)) return false;
  std::erase_if(members_, [&](const Candidate& m) { return dominates(c.record, m.record); });
  for (const auto& m : members_)
    if (m.genotype == c.genotype) return false;
  members_.push_back(c);
  return true;
}

std::unique_ptr<Evaluator> make_evaluator(const SearchConfig& cfg) {
  if (cfg.evaluator == EvaluatorKind::Surrogate) return std::make_unique<SurrogateEvaluator>(cfg.planner);
  if (cfg.worker_command.empty()) throw WorkerSpawnError("external evaluator selected but no worker command is set");
  WorkerConfig wc;
  wc.command = cfg.worker_command;
  wc.budget = cfg.proxy;
  wc.handshake_timeout_seconds = cfg.handshake_timeout_seconds;
  wc.planner = cfg.planner;
  auto ev = std::make_unique<ExternalEvaluator>(wc, cfg.pool_size);
  ev->start();
  return ev;
}

SearchState initialize(const SearchConfig& cfg, Evaluator& evaluator) {
  SearchState state;
  SeededRandom rng(derive_seed(cfg.seed, 0, 0));
  std::vector<Genotype> genotypes;
  for (int i = 0; i < cfg.population_size; ++i) genotypes.push_back(sample_genotype(cfg.space, rng));
  std::vector<std::optional<Genotype>> hints(genotypes.size());
  state.population = evaluate_and_merge(state, cfg, evaluator, genotypes, hints, 0);
  state.generation = 0;
  return state;
}

const Candidate& tournament_select(const std::vector<Candidate>& population, int k, RandomSource& rng) {
  const auto hi = static_cast<std::int64_t>(population.size()) - 1;
  const Candidate* winner = &population[static_cast<std::size_t>(rng.uniform_int(0, hi))];
  for (int i = 1; i < k; ++i) {
    const Candidate* c = &population[static_cast<std::size_t>(rng.uniform_int(0, hi))];
    if (ranks_before(*c, *winner)) winner = c;
  }
  return *winner;
}

std::vector<Candidate> elitist_replace(const std::vector<Candidate>& population,
                                       const std::vector<Candidate>& offspring, int m) {
  std::vector<Candidate> pool = population;
  pool.insert(pool.end(), offspring.begin(), offspring.end());
  std::sort(pool.begin(), pool.end(), ranks_before);
  pool.resize(std::min<std::size_t>(pool.size(), static_cast<std::size_t>(m)));
  return pool;
}

void step_generation(SearchState& state, const SearchConfig& cfg, Evaluator& evaluator) {
  const int t = state.generation + 1;
  const auto m = static_cast<std::size_t>(cfg.population_size);
  SeededRandom pick_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t), 0));
  std::vector<const Candidate*> parents;
  parents.reserve(2 * m);
  for (std::size_t i = 0; i < 2 * m; ++i)
    parents.push_back(&tournament_select(state.population, cfg.tournament_size, pick_rng));

  std::vector<Genotype> children;
  std::vector<std::optional<Genotype>> hints;
  for (std::size_t i = 0; i < m; ++i) {
    SeededRandom rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t), i + 1));
    const Genotype& a = parents[2 * i]->genotype;
    const Genotype& b = parents[2 * i + 1]->genotype;
    children.push_back(make_offspring(a, b, cfg.variation, cfg.space, rng));
    hints.emplace_back(a);
  }
  const std::vector<Candidate> offspring = evaluate_and_merge(state, cfg, evaluator, children, hints, t);
  state.population = elitist_replace(state.population, offspring, cfg.population_size);
  state.generation = t;
}

SearchState run(const SearchConfig& cfg, Evaluator& evaluator) {
  SearchState state = initialize(cfg, evaluator);
  for (int t = 0; t < cfg.generations; ++t) step_generation(state, cfg, evaluator);
  return state;
}

std::vector<FitnessRecord> evaluate_genotypes(const std::vector<Genotype>& genotypes, const SearchConfig& cfg,
                                              Evaluator& evaluator) {
  std::vector<std::uint64_t> ids(genotypes.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  const std::vector<std::optional<Genotype>> hints(genotypes.size());
  return score(genotypes, ids, hints, 0, cfg, evaluator);
}

std::string history_line(const Candidate& c) {
  json j = json::object();
  j["generation"] = c.generation;
  j["id"] = c.id;
  j["genotype"] = genotype_to_json(c.genotype);
  j["record"] = record_to_json(c.record);
  return j.dump();
}

std::string format_history(const std::vector<Candidate>& history) {
  std::string out;
  for (const auto& c : history) {
    out += history_line(c);
    out.push_back('\n');
  }
  return out;
}

std::vector<Candidate> parse_history(std::string_view text) {
  std::vector<Candidate> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const json j = json::parse(line.begin(), line.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError("malformed history record", static_cast<int>(line_no));
    try {
      Candidate c;
      const auto gen = j.find("generation");
      const auto id = j.find("id");
      if (gen == j.end() || !gen->is_number_integer() || gen->get<std::int64_t>() < 0 || gen->get<std::int64_t>() > 1'000'000'000)
        throw ParseError("field 'generation' must be a non-negative integer");
      if (id == j.end() || !id->is_number_unsigned()) throw ParseError("field 'id' must be a non-negative integer");
      c.generation = gen->get<int>();
      c.id = id->get<std::uint64_t>();
      const auto g = j.find("genotype");
      const auto r = j.find("record");
      if (g == j.end()) throw ParseError("missing field 'genotype'");
      if (r == j.end()) throw ParseError("missing field 'record'");
      c.genotype = genotype_from_json(*g);
      c.record = record_from_json(*r);
      out.push_back(std::move(c));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), static_cast<int>(line_no));
    }
    if (end == text.size()) break;
  }
  return out;
}

std::string format_summary(const SearchState& state, const SearchConfig& cfg) {
  std::string out;
  out += "search summary\n";
  out += "evaluator: " + std::string(to_string(cfg.evaluator)) + "\n";
  out += "seed: " + std::to_string(cfg.seed) + "\n";
  out += "population_size: " + std::to_string(cfg.population_size) + "\n";
  out += "generations: " + std::to_string(state.generation) + "\n";
  const auto m = static_cast<std::uint64_t>(cfg.population_size);
  out += "evaluations_including_initial: " + std::to_string(state.history.size()) + "\n";
  out += "evaluations_offspring_only: " + std::to_string(m * static_cast<std::uint64_t>(state.generation)) + "\n";
  std::size_t failed = 0;
  std::size_t infeasible = 0;
  for (const auto& c : state.history) {
    if (c.record.status == EvalStatus::Failed) ++failed;
    if (c.record.status == EvalStatus::Infeasible) ++infeasible;
  }
  out += "failed: " + std::to_string(failed) + "\n";
  out += "infeasible: " + std::to_string(infeasible) + "\n";
  out += "\n[best]\n";
  if (state.best) {
    const Candidate& b = *state.best;
    out += "id: " + std::to_string(b.id) + "\n";
    out += "generation: " + std::to_string(b.generation) + "\n";
    out += "genotype: " + to_compact_record(b.genotype) + "\n";
    out += "scalar_fitness: " + format_real(b.record.scalar_fitness) + "\n";
    out += "dsc_avg: " + format_real(b.record.dsc_avg) + "\n";
    out += "hd95_avg: " + format_real(b.record.hd95_avg) + "\n";
    out += "params: " + std::to_string(b.record.params) + "\n";
    out += "flops: " + std::to_string(b.record.flops) + "\n";
  } else {
    out += "none\n";
  }
  out += "\n[archive]\n";
  out += "size: " + std::to_string(state.archive.size()) + "\n";
  out += "id,dsc_avg,hd95_avg,params,flops,genotype\n";
  for (const auto& c : state.archive.members()) {
    out += std::to_string(c.id) + "," + format_real(c.record.dsc_avg) + "," + format_real(c.record.hd95_avg) + "," +
           std::to_string(c.record.params) + "," + std::to_string(c.record.flops) + ",\"" +
           to_compact_record(c.genotype) + "\"\n";
  }
  out += "\n[ledger]\n";
  out += state.ledger.report();
  return out;
}

}  // namespace resnas
