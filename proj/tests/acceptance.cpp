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
// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "resnas/analysis.hpp"
#include "resnas/evolution.hpp"
#include "resnas/ledger.hpp"
#include "resnas/metrics.hpp"
#include "resnas/planner.hpp"
#include "resnas/text.hpp"
#include "resnas/variation.hpp"
#include "test_support.hpp"

namespace resnas {
namespace {

using Clock = std::chrono::steady_clock;
using Check = std::function<std::optional<std::string>()>;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<std::string> metric_oracle() {
  const auto t0 = Clock::now();
  SeededRandom rng(20260101);
  std::size_t hd_checked = 0;
  for (int pair = 0; pair < 500; ++pair) {
    const int h = static_cast<int>(rng.uniform_int(1, 64));
    const int w = static_cast<int>(rng.uniform_int(1, 64));
    const LabelMask a = testing::random_mask(rng, h, w);
    const LabelMask b = testing::random_mask(rng, h, w);
    const double spacing = pair % 2 == 0 ? 1.0 : 0.5 + rng.uniform01();
    for (int cls = 1; cls <= 3; ++cls) {
      const double got = dsc(a, b, cls);
      const double want = testing::dsc_oracle(a, b, cls);
      if (got != want) return "pair " + std::to_string(pair) + " class " + std::to_string(cls) + ": dsc " + str(got) + " vs " + str(want);
      if (!testing::has_class(a, cls) || !testing::has_class(b, cls)) continue;
      const double hg = hd95(a, b, cls, spacing);
      const double hw = testing::hd95_oracle(a, b, cls, spacing);
      if (std::abs(hg - hw) > 1e-9) return "pair " + std::to_string(pair) + " class " + std::to_string(cls) + ": hd95 " + str(hg) + " vs " + str(hw);
      ++hd_checked;
    }
  }
  const double took = seconds_since(t0);
  if (hd_checked < 500) return "only " + std::to_string(hd_checked) + " hd95 comparisons";
  if (took >= 60) return "took " + str(took) + " s";
  return std::nullopt;
}

std::optional<std::string> metric_fixtures() {
  LabelMask id(16, 16);
  for (int r = 3; r < 11; ++r)
    for (int c = 4; c < 12; ++c) id.set(r, c, kClassLV);
  if (dsc(id, id, kClassLV) != 1.0 || hd95(id, id, kClassLV) != 0.0) return "identity pair";
  LabelMask d1(16, 16), d2(16, 16);
  for (int i = 0; i < 4; ++i) {
    d1.set(i, i, kClassMYO);
    d2.set(15 - i, 12 + i, kClassMYO);
  }
  if (dsc(d1, d2, kClassMYO) != 0.0) return "disjoint pair";
  LabelMask p(8, 8), q(8, 8);
  p.set(0, 0, kClassRV);
  q.set(3, 4, kClassRV);
  for (double s : {1.0, 0.5, 1.5625, 2.0}) {
    const double got = hd95(p, q, kClassRV, s);
    if (got != 5.0 * s) return "3-4-5 fixture at spacing " + str(s) + " gave " + str(got);
  }
  return std::nullopt;
}

std::optional<std::string> closure() {
  const auto t0 = Clock::now();
  const SearchSpace space;
  const VariationConfig cfg;
  SeededRandom rng(99);
  std::vector<Genotype> sampled;
  for (int i = 0; i < 10000; ++i) {
    sampled.push_back(sample_genotype(space, rng));
    if (const auto v = validate(space, sampled.back()); !v.ok()) return "sample " + std::to_string(i) + ": " + v.message();
  }
  for (int i = 0; i < 10000; ++i) {
    const Genotype& a = sampled[static_cast<std::size_t>(rng.uniform_int(0, 9999))];
    const Genotype& b = sampled[static_cast<std::size_t>(rng.uniform_int(0, 9999))];
    const Genotype child = i % 3 == 0 ? mutate(a, space, cfg, rng) : make_offspring(a, b, cfg, space, rng);
    if (const auto v = validate(space, child); !v.ok()) return "variation output " + std::to_string(i) + ": " + v.message();
  }
  const double took = seconds_since(t0);
  if (took >= 10) return "took " + str(took) + " s";
  return std::nullopt;
}

std::optional<std::string> blend_law() {
  using testing::R;
  SeededRandom rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Genotype a = sample_genotype(SearchSpace{}, rng);
    const Genotype b = sample_genotype(SearchSpace{}, rng);
    const double lambda = trial == 0 ? 0.0 : trial == 1 ? 1.0 : rng.uniform01();
    std::vector<testing::ScriptedRandom::Draw> draws(7, R(0.99));
    draws.push_back(R(lambda));
    testing::ScriptedRandom script(draws);
    const Genotype child = uniform_crossover(a, b, VariationConfig{}, script);
    const double want = lambda * a.residual_scale + (1 - lambda) * b.residual_scale;
    if (std::abs(child.residual_scale - want) > 1e-12)
      return "lambda " + str(lambda) + ": alpha " + str(child.residual_scale) + " vs " + str(want);
  }
  return std::nullopt;
}

SearchConfig default_run(std::uint64_t seed = 7) {
  SearchConfig cfg;
  cfg.population_size = 10;
  cfg.generations = 20;
  cfg.seed = seed;
  return cfg;
}

std::optional<std::string> elitism() {
  const auto t0 = Clock::now();
  const SearchConfig cfg = default_run();
  SurrogateEvaluator ev;
  const SearchState s = run(cfg, ev);
  // Best fitness of the population after each generation, rebuilt from the
  // history: elitist replacement keeps the best-so-far in the population.
  std::vector<double> series;
  double running = kFailedFitness;
  for (int g = 0; g <= cfg.generations; ++g) {
    for (const auto& c : s.history)
      if (c.generation == g) running = std::max(running, c.record.scalar_fitness);
    series.push_back(running);
  }
  SearchState replay = initialize(cfg, ev);
  for (int g = 0; g <= cfg.generations; ++g) {
    if (g > 0) step_generation(replay, cfg, ev);
    double pop_best = kFailedFitness;
    for (const auto& c : replay.population) pop_best = std::max(pop_best, c.record.scalar_fitness);
    if (pop_best != series[static_cast<std::size_t>(g)])
      return "generation " + std::to_string(g) + ": population best " + str(pop_best) + " vs history best " +
             str(series[static_cast<std::size_t>(g)]);
    if (g > 0 && series[static_cast<std::size_t>(g)] < series[static_cast<std::size_t>(g - 1)])
      return "best fitness dropped at generation " + std::to_string(g);
  }
  const double took = seconds_since(t0);
  if (took >= 30) return "took " + str(took) + " s";
  return std::nullopt;
}

std::optional<std::string> replacement() {
  SearchConfig cfg = default_run(11);
  cfg.generations = 100;
  cfg.budget.max_params = 3'000'000;
  SurrogateEvaluator ev;
  SearchState s = initialize(cfg, ev);
  const auto m = static_cast<std::size_t>(cfg.population_size);
  for (int t = 1; t <= cfg.generations; ++t) {
    std::vector<Candidate> all = s.population;
    const std::size_t before = s.history.size();
    step_generation(s, cfg, ev);
    all.insert(all.end(), s.history.begin() + static_cast<std::ptrdiff_t>(before), s.history.end());
    // Brute-force top M: rank of each candidate is the number ranking before it.
    std::vector<std::pair<std::size_t, std::uint64_t>> ranked;
    for (const auto& c : all) {
      std::size_t r = 0;
      for (const auto& o : all) r += ranks_before(o, c);
      ranked.emplace_back(r, c.id);
    }
    std::sort(ranked.begin(), ranked.end());
    if (s.population.size() != m) return "generation " + std::to_string(t) + ": population size changed";
    for (std::size_t i = 0; i < m; ++i) {
      if (ranked[i].first != i) return "generation " + std::to_string(t) + ": order is not total";
      if (s.population[i].id != ranked[i].second)
        return "generation " + std::to_string(t) + ": slot " + std::to_string(i) + " holds id " +
               std::to_string(s.population[i].id) + ", expected " + std::to_string(ranked[i].second);
    }
  }
  return std::nullopt;
}

std::optional<std::string> archive() {
  for (std::uint64_t seed : {7ULL, 8ULL, 9ULL}) {
    SearchConfig cfg = default_run(seed);
    cfg.budget.max_flops = 20'000'000'000;
    SurrogateEvaluator ev;
    const SearchState s = run(cfg, ev);
    const auto& members = s.archive.members();
    if (const auto v = count_dominance_violations(members); v != 0)
      return "seed " + std::to_string(seed) + ": " + std::to_string(v) + " dominated archive members";
    for (const auto& m : members) {
      if (!m.record.ok()) return "archive holds a non-Ok record";
      for (const auto& c : s.history)
        if (c.record.ok() && dominates(c.record, m.record))
          return "seed " + std::to_string(seed) + ": archive member " + std::to_string(m.id) + " dominated by " +
                 std::to_string(c.id);
    }
    for (const auto& c : s.history) {
      if (!c.record.ok()) continue;
      bool dominated = false;
      for (const auto& o : s.history) dominated = dominated || (o.record.ok() && dominates(o.record, c.record));
      const bool present = std::any_of(members.begin(), members.end(), [&](const Candidate& m) { return m.genotype == c.genotype; });
      if (!dominated && !present)
        return "seed " + std::to_string(seed) + ": non-dominated candidate " + std::to_string(c.id) + " missing";
    }
  }
  return std::nullopt;
}

std::optional<std::string> complexity_band() {
  const Genotype g = reference_genotype();
  const ArchitecturePlan plan = build_plan(g);
  std::cout << format_plan_report(plan);
  const auto issues = verify_plan(plan);
  for (const auto& i : issues) std::cout << "audit: " << i << "\n";
  if (!issues.empty()) return std::to_string(issues.size()) + " audit issues";
  if (plan.total_params < 1'790'000 || plan.total_params > 7'160'000)
    return "params " + std::to_string(plan.total_params) + " outside [1.79M, 7.16M]";
  if (plan.total_flops < 7'280'000'000ULL || plan.total_flops > 29'120'000'000ULL)
    return "flops " + std::to_string(plan.total_flops) + " outside [7.28G, 29.12G]";
  return std::nullopt;
}

std::optional<std::string> monotonicity() {
  SeededRandom rng(50);
  for (int sweep = 0; sweep < 50; ++sweep) {
    Genotype g = sample_genotype(SearchSpace{}, rng);
    std::uint64_t last_p = 0, last_f = 0;
    for (int f = 32; f <= 127; ++f) {
      g.filter_base = f;
      const auto plan = build_plan(g);
      if (plan.total_params < last_p || plan.total_flops < last_f)
        return "sweep " + std::to_string(sweep) + ": decrease at filter_base " + std::to_string(f);
      last_p = plan.total_params;
      last_f = plan.total_flops;
    }
    last_p = last_f = 0;
    for (int n = 2; n <= 4; ++n) {
      g.num_stages = n;
      const auto plan = build_plan(g);
      if (plan.total_params < last_p || plan.total_flops < last_f)
        return "sweep " + std::to_string(sweep) + ": decrease at num_stages " + std::to_string(n);
      last_p = plan.total_params;
      last_f = plan.total_flops;
    }
  }
  return std::nullopt;
}

std::optional<std::string> ledger() {
  BudgetLedger l;
  FitnessRecord r;
  r.eval_cost_seconds = 77.76;
  for (std::uint64_t i = 0; i < 200; ++i) budget_ledger_update(l, static_cast<int>(i / 10), i, r);
  if (std::abs(l.device_days() - 0.18) > 1e-6) return "device_days " + str(l.device_days());
  return std::nullopt;
}

double two_pass_pearson(const std::vector<std::vector<double>>& rows, std::size_t i, std::size_t j) {
  const double n = static_cast<double>(rows.size());
  double mi = 0, mj = 0;
  for (const auto& r : rows) {
    mi += r[i] / n;
    mj += r[j] / n;
  }
  double sij = 0, sii = 0, sjj = 0;
  for (const auto& r : rows) {
    sij += (r[i] - mi) * (r[j] - mj);
    sii += (r[i] - mi) * (r[i] - mi);
    sjj += (r[j] - mj) * (r[j] - mj);
  }
  return i == j ? 1.0 : sij / std::sqrt(sii * sjj);
}

std::optional<std::string> correlation() {
  SeededRandom rng(200);
  std::vector<std::vector<double>> rows(200, std::vector<double>(12));
  for (auto& r : rows)
    for (std::size_t c = 0; c < 12; ++c) r[c] = (rng.uniform01() - 0.5) * std::pow(10.0, static_cast<double>(c % 4));
  for (auto& r : rows) r[5] += 0.7 * r[1];
  std::vector<std::string> labels;
  for (int i = 0; i < 12; ++i) labels.push_back("x" + std::to_string(i));
  const auto m = correlate_rows(rows, labels);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j)
      if (std::abs(m.values[i][j] - two_pass_pearson(rows, i, j)) > 1e-9)
        return "entry (" + std::to_string(i) + "," + std::to_string(j) + ") differs";
  for (auto& r : rows) r.push_back(-4.0 + 2.5 * r[3]);
  labels.emplace_back("linear");
  const auto lin = correlate_rows(rows, labels);
  if (std::abs(lin.values[3][12] - 1.0) > 1e-9) return "linear column coefficient " + str(lin.values[3][12]);
  return std::nullopt;
}

std::optional<std::string> fault_run(const std::string& flag, int max_seconds) {
  SearchConfig cfg;
  cfg.population_size = 4;
  cfg.generations = 3;
  cfg.evaluator = EvaluatorKind::External;
  cfg.proxy.max_train_seconds = max_seconds;
  cfg.handshake_timeout_seconds = 10;
  constexpr std::uint64_t kFaultId = 6;
  cfg.worker_command = testing::stub_worker_command(flag + " " + std::to_string(kFaultId));
  std::unique_ptr<Evaluator> ev;
  try {
    ev = make_evaluator(cfg);
  } catch (const std::exception& e) {
    return flag + ": " + e.what();
  }
  SearchState s = initialize(cfg, *ev);
  for (int t = 0; t <= cfg.generations; ++t) {
    if (t > 0) step_generation(s, cfg, *ev);
    if (s.population.size() != static_cast<std::size_t>(cfg.population_size))
      return flag + ": population size " + std::to_string(s.population.size()) + " at generation " + std::to_string(t);
  }
  std::size_t failed = 0;
  for (const auto& c : s.history) {
    if (c.record.status == EvalStatus::Failed) {
      ++failed;
      if (c.id != kFaultId) return flag + ": unexpected failure of candidate " + std::to_string(c.id);
    }
  }
  if (failed != 1) return flag + ": " + std::to_string(failed) + " failed candidates";
  if (s.history.size() != 16) return flag + ": " + std::to_string(s.history.size()) + " evaluations";
  return std::nullopt;
}

std::optional<std::string> fault_injection() {
  for (const auto& [flag, secs] : std::vector<std::pair<std::string, int>>{
           {"--stall-id", 1}, {"--malformed-id", 30}, {"--crash-id", 30}}) {
    if (auto f = fault_run(flag, secs)) return f;
  }
  return std::nullopt;
}

std::optional<std::string> determinism() {
  const auto dir = testing::scratch_dir("acceptance_determinism");
  std::string files[2];
  for (int i = 0; i < 2; ++i) {
    SurrogateEvaluator ev;
    const auto path = (dir / ("history" + std::to_string(i) + ".jsonl")).string();
    write_text_file(path, format_history(run(default_run(2026), ev).history));
    files[i] = read_text_file(path);
  }
  if (files[0].empty()) return "empty history";
  if (files[0] != files[1]) return "history files differ";
  return std::nullopt;
}

}  // namespace
}  // namespace resnas

int main() {
  using resnas::Check;
  const std::vector<std::pair<std::string, Check>> checks{
      {"metric oracle suite", resnas::metric_oracle},
      {"metric fixtures", resnas::metric_fixtures},
      {"search-space closure", resnas::closure},
      {"crossover blend law", resnas::blend_law},
      {"elitism", resnas::elitism},
      {"replacement correctness", resnas::replacement},
      {"archive soundness and completeness", resnas::archive},
      {"complexity band", resnas::complexity_band},
      {"complexity monotonicity", resnas::monotonicity},
      {"ledger arithmetic", resnas::ledger},
      {"correlation oracle", resnas::correlation},
      {"fault injection", resnas::fault_injection},
      {"determinism", resnas::determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<std::string> problem;
    try {
      problem = check();
    } catch (const std::exception& e) {
      problem = std::string("exception: ") + e.what();
    }
    const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", took);
    if (problem) {
      ++failures;
      std::cout << "FAIL " << name << " (" << timing << "): " << *problem << std::endl;
    } else {
      std::cout << "PASS " << name << " (" << timing << ")" << std::endl;
    }
  }
  std::cout << (checks.size() - static_cast<std::size_t>(failures)) << "/" << checks.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
