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
#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>

#include "resnas/analysis.hpp"
#include "resnas/config.hpp"
#include "resnas/evolution.hpp"
#include "resnas/mask_io.hpp"
#include "resnas/metrics.hpp"
#include "resnas/planner.hpp"
#include "resnas/search_space.hpp"
#include "resnas/text.hpp"
#include "resnas/worker.hpp"

namespace resnas::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kReferenceParams = 3.58e6;
constexpr double kReferenceFlops = 14.56e9;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string path_in(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

// search ---------------------------------------------------------------------

struct SearchArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int cmd_search(const SearchArgs& a, std::ostream& out, std::ostream& err) {
  SearchConfig cfg;
  try {
    cfg = load_config(a.config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (a.seed) cfg.seed = *a.seed;
  if (const char* env = std::getenv(kWorkerCommandEnv); env != nullptr && *env != '\0') cfg.worker_command = env;

  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) {
    err << "cannot create output directory '" << a.out << "': " << ec.message() << "\n";
    return kExitUsage;
  }
  std::unique_ptr<Evaluator> evaluator;
  try {
    write_text_file(path_in(a.out, "config.resolved"), format_config(cfg));
    evaluator = make_evaluator(cfg);
  } catch (const WorkerSpawnError& e) {
    err << "worker spawn failed: " << e.what() << "\n";
    return kExitWorker;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitData;
  }

  const SearchState state = run(cfg, *evaluator);
  const ParetoExport archive = pareto_front_export(state.archive.members());
  std::string log;
  for (const auto& line : state.log) log += line + "\n";
  try {
    write_text_file(path_in(a.out, "history.jsonl"), format_history(state.history));
    write_text_file(path_in(a.out, "summary.txt"), format_summary(state, cfg));
    write_text_file(path_in(a.out, "archive.csv"), write_csv(archive.table));
    write_text_file(path_in(a.out, "ledger.txt"), state.ledger.report());
    write_text_file(path_in(a.out, "search.log"), log);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitData;
  }
  out << "generations: " << state.generation << "\n";
  out << "evaluations: " << state.history.size() << " (" << cfg.population_size * state.generation
      << " excluding the initial population)\n";
  if (state.best) {
    out << "best: " << to_compact_record(state.best->genotype) << "\n";
    out << "best scalar_fitness: " << format_real(state.best->record.scalar_fitness) << "\n";
  }
  out << "archive size: " << state.archive.size() << "\n";
  out << "device_days: " << format_real(state.ledger.device_days()) << "\n";
  out << "outputs written to " << a.out << "\n";
  return kExitOk;
}

// plan -----------------------------------------------------------------------

struct PlanArgs {
  std::string genotype;
  std::string genotype_file;
  std::string config;
};

int cmd_plan(const PlanArgs& a, std::ostream& out, std::ostream& err) {
  SearchConfig cfg;
  if (!a.config.empty()) {
    try {
      cfg = load_config(a.config);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  if (a.genotype.empty() == a.genotype_file.empty()) {
    err << "give exactly one of --genotype or --genotype-file\n";
    return kExitUsage;
  }
  Genotype g;
  try {
    const std::string text = a.genotype.empty() ? read_text_file(a.genotype_file) : a.genotype;
    g = parse_genotype_record(text);
  } catch (const std::exception& e) {
    err << "invalid genotype: " << e.what() << "\n";
    return kExitUsage;
  }
  if (const auto v = validate(SearchSpace{}, g); !v.ok()) {
    err << "invalid genotype: " << v.message() << "\n";
    return kExitUsage;
  }
  const ArchitecturePlan plan = build_plan(g, cfg.planner);
  out << format_plan_report(plan);
  const auto issues = verify_plan(plan);
  out << "audit: " << (issues.empty() ? "ok" : std::to_string(issues.size()) + " issue(s)") << "\n";
  for (const auto& i : issues) out << "  " << i << "\n";
  const double pr = static_cast<double>(plan.total_params) / kReferenceParams;
  const double fr = static_cast<double>(plan.total_flops) / kReferenceFlops;
  out << "params vs 3.58M reference: ratio " << fixed(pr, 3) << (pr >= 0.5 && pr <= 2.0 ? " (within 2x)" : " (outside 2x)")
      << "\n";
  out << "flops vs 14.56G reference: ratio " << fixed(fr, 3) << (fr >= 0.5 && fr <= 2.0 ? " (within 2x)" : " (outside 2x)")
      << "\n";
  const Feasibility f = check_constraints(plan, cfg.budget);
  out << "budget: " << (f.feasible ? "feasible" : f.describe()) << "\n";
  return issues.empty() ? kExitOk : kExitData;
}

// score-masks ----------------------------------------------------------------

struct ScoreArgs {
  std::string pred;
  std::string gt;
  double spacing = 1.0;
  std::string out;
};

std::map<std::string, fs::path> list_masks(const std::string& dir) {
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) out.emplace(e.path().filename().string(), e.path());
  return out;
}

std::string opt_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

int cmd_score(const ScoreArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.spacing > 0.0) || !std::isfinite(a.spacing)) {
    err << "--spacing must be a positive number\n";
    return kExitUsage;
  }
  std::map<std::string, fs::path> pred;
  std::map<std::string, fs::path> gt;
  try {
    pred = list_masks(a.pred);
    gt = list_masks(a.gt);
  } catch (const fs::filesystem_error& e) {
    err << e.what() << "\n";
    return kExitData;
  }
  bool fault = false;
  for (const auto& [name, _] : pred)
    if (!gt.count(name)) {
      err << "unpaired prediction: " << name << "\n";
      fault = true;
    }
  for (const auto& [name, _] : gt)
    if (!pred.count(name)) {
      err << "unpaired ground truth: " << name << "\n";
      fault = true;
    }

  Table t;
  t.header = {"name",    "status",  "dsc_lv",  "dsc_myo",  "dsc_rv", "dsc_avg",
              "hd95_lv", "hd95_myo", "hd95_rv", "hd95_avg", "error"};
  double dsc_sum = 0.0;
  double hd_sum = 0.0;
  std::size_t scored = 0;
  std::size_t hd_count = 0;
  for (const auto& [name, ppath] : pred) {
    const auto it = gt.find(name);
    if (it == gt.end()) continue;
    try {
      const MetricReport r = report(read_mask(ppath.string()), read_mask(it->second.string()), a.spacing);
      t.rows.push_back({name, "ok", format_real(r.for_class(kClassLV).dsc), format_real(r.for_class(kClassMYO).dsc),
                        format_real(r.for_class(kClassRV).dsc), format_real(r.dsc_avg),
                        opt_real(r.for_class(kClassLV).hd95), opt_real(r.for_class(kClassMYO).hd95),
                        opt_real(r.for_class(kClassRV).hd95), opt_real(r.hd95_avg), ""});
      dsc_sum += r.dsc_avg;
      ++scored;
      if (r.hd95_avg) {
        hd_sum += *r.hd95_avg;
        ++hd_count;
      }
    } catch (const std::exception& e) {
      fault = true;
      err << name << ": " << e.what() << "\n";
      t.rows.push_back({name, "error", "", "", "", "", "", "", "", "", e.what()});
    }
  }
  t.rows.push_back({"mean", scored ? "ok" : "empty", "", "", "", scored ? format_real(dsc_sum / scored) : "", "", "",
                    "", hd_count ? format_real(hd_sum / hd_count) : "", ""});
  const std::string csv = write_csv(t);
  out << csv;
  if (!a.out.empty()) {
    try {
      write_text_file(a.out, csv);
    } catch (const std::exception& e) {
      err << e.what() << "\n";
      return kExitData;
    }
  }
  return fault ? kExitData : kExitOk;
}

// analyze --------------------------------------------------------------------

struct AnalyzeArgs {
  std::string history;
  std::string out;
  std::string method = "pearson";
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  CorrelationMethod method;
  try {
    method = parse_correlation_method(a.method);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  std::vector<Candidate> history;
  try {
    history = parse_history(read_text_file(a.history));
  } catch (const std::exception& e) {
    err << a.history << ": " << e.what() << "\n";
    return kExitData;
  }
  CorrelationMatrix m;
  try {
    m = correlate(history, method);
  } catch (const InsufficientData& e) {
    err << e.what() << "\n";
    return kExitData;
  }
  const ParetoExport pareto = pareto_front_export(pareto_front_of(history));
  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) {
    err << "cannot create output directory '" << a.out << "': " << ec.message() << "\n";
    return kExitUsage;
  }
  try {
    write_text_file(path_in(a.out, "correlation.csv"), write_csv(correlation_table(m)));
    write_text_file(path_in(a.out, "pareto.csv"), write_csv(pareto.table));
    write_text_file(path_in(a.out, "curves.csv"), write_csv(curve_export(history)));
    write_text_file(path_in(a.out, "training_curves.csv"), write_csv(training_curves(history)));
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitData;
  }
  out << "rows used: " << m.rows << " of " << history.size() << "\n";
  out << "correlation: " << m.labels.size() << "x" << m.labels.size() << " (" << to_string(m.method) << ")\n";
  for (std::size_t i = 0; i < m.labels.size(); ++i)
    if (m.constant[i]) out << "constant column: " << m.labels[i] << " (correlations set to 0)\n";
  out << "pareto front: " << pareto.table.rows.size() << " rows\n";
  if (pareto.dominance_violations != 0) {
    err << "pareto export failed its dominance check (" << pareto.dominance_violations << " violations)\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resource-aware evolutionary architecture search"};
  app.name(args.empty() ? "resnas" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);

  SearchArgs search;
  std::uint64_t seed = 0;
  auto* s = app.add_subcommand("search", "Run the evolutionary search");
  s->add_option("--config", search.config, "Run configuration file")->required();
  s->add_option("--out", search.out, "Output directory")->required();
  auto* seed_opt = s->add_option("--seed", seed, "Override the configured seed");

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "Print the layer plan and complexity of a genotype");
  p->add_option("--genotype", plan.genotype, "Genotype record, e.g. filter_base=96,kernel_size=3,...");
  p->add_option("--genotype-file", plan.genotype_file, "File holding a genotype record");
  p->add_option("--config", plan.config, "Run configuration (planner and budget keys)");

  ScoreArgs score;
  auto* sc = app.add_subcommand("score-masks", "Score predicted masks against ground truth");
  sc->add_option("--pred", score.pred, "Directory of predicted masks")->required();
  sc->add_option("--gt", score.gt, "Directory of ground-truth masks")->required();
  sc->add_option("--spacing", score.spacing, "Pixel spacing in mm (default 1)");
  sc->add_option("--out", score.out, "Write the table to this CSV file");

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Correlation, Pareto and curve tables from a search history");
  an->add_option("--history", analyze.history, "history.jsonl from a search")->required();
  an->add_option("--out", analyze.out, "Output directory")->required();
  an->add_option("--method", analyze.method, "pearson (default) or spearman");

  std::vector<const char*> argv;
  std::vector<std::string> storage = args.empty() ? std::vector<std::string>{"resnas"} : args;
  for (const auto& a : storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (seed_opt->count() > 0) search.seed = seed;
  if (s->parsed()) return cmd_search(search, out, err);
  if (p->parsed()) return cmd_plan(plan, out, err);
  if (sc->parsed()) return cmd_score(score, out, err);
  return cmd_analyze(analyze, out, err);
}

}  // namespace resnas::cli
