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
#include "resnas/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "resnas/text.hpp"

namespace resnas {

namespace {

std::string csv_field(const std::string& f) {
  if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void append_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_field(row[i]);
  }
  out.push_back('\n');
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[idx[t]] = r;
    i = j + 1;
  }
  return rank;
}

std::string real_or_empty(double v) { return std::isfinite(v) ? format_real(v) : std::string(); }

}  // namespace

std::string write_csv(const Table& table) {
  std::string out;
  append_row(out, table.header);
  for (const auto& r : table.rows) append_row(out, r);
  return out;
}

Table read_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  int line = 1;
  int record_line = 1;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started && field.empty()) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      end_record();
      ++line;
      record_line = line;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", record_line);
  if (field_started || !field.empty() || !row.empty()) end_record();

  Table t;
  if (records.empty()) return t;
  t.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != t.header.size()) {
      throw ParseError("row has " + std::to_string(records[i].size()) + " fields, header has " +
                           std::to_string(t.header.size()),
                       static_cast<int>(i + 1));
    }
    t.rows.push_back(std::move(records[i]));
  }
  return t;
}

InsufficientData::InsufficientData(std::size_t have, std::size_t need)
    : std::runtime_error("insufficient data: need ≥ " + std::to_string(need) +
                         " evaluated candidates with finite metrics, got " + std::to_string(have)),
      have_(have) {}

std::string_view to_string(CorrelationMethod m) { return m == CorrelationMethod::Pearson ? "pearson" : "spearman"; }

CorrelationMethod parse_correlation_method(std::string_view text) {
  if (text == "pearson") return CorrelationMethod::Pearson;
  if (text == "spearman") return CorrelationMethod::Spearman;
  throw ParseError("unknown correlation method '" + std::string(text) + "' (expected pearson or spearman)");
}

std::vector<std::string> analysis_labels() {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kGeneCount; ++i) out.emplace_back(gene_name(static_cast<Gene>(i)));
  for (const char* s : {"dsc_avg", "hd95_avg", "params", "flops"}) out.emplace_back(s);
  return out;
}

std::vector<AnalysisRow> analysis_rows(const std::vector<Candidate>& history) {
  std::vector<AnalysisRow> out;
  for (const auto& c : history) {
    const FitnessRecord& r = c.record;
    if (!r.ok() || !std::isfinite(r.dsc_avg) || !std::isfinite(r.hd95_avg)) continue;
    AnalysisRow row{};
    const NumericVector genes = encode_numeric(c.genotype);
    std::copy(genes.begin(), genes.end(), row.begin());
    row[kGeneCount] = r.dsc_avg;
    row[kGeneCount + 1] = r.hd95_avg;
    row[kGeneCount + 2] = static_cast<double>(r.params);
    row[kGeneCount + 3] = static_cast<double>(r.flops);
    out.push_back(row);
  }
  return out;
}

CorrelationMatrix correlate_rows(std::vector<std::vector<double>> rows, std::vector<std::string> labels,
                                 CorrelationMethod method) {
  constexpr std::size_t kMinRows = 3;
  if (rows.size() < kMinRows) throw InsufficientData(rows.size(), kMinRows);
  const std::size_t p = labels.size();
  for (const auto& r : rows)
    if (r.size() != p) throw std::invalid_argument("row width does not match the label count");

  if (method == CorrelationMethod::Spearman) {
    for (std::size_t j = 0; j < p; ++j) {
      std::vector<double> col(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i][j];
      const auto ranks = average_ranks(col);
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i][j] = ranks[i];
    }
  }
  std::sort(rows.begin(), rows.end());

  std::vector<double> mean(p, 0.0);
  std::vector<double> delta(p);
  std::vector<std::vector<double>> co(p, std::vector<double>(p, 0.0));
  double n = 0.0;
  for (const auto& r : rows) {
    n += 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      delta[j] = r[j] - mean[j];
      mean[j] += delta[j] / n;
    }
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a; b < p; ++b) co[a][b] += delta[a] * (r[b] - mean[b]);
  }

  CorrelationMatrix m;
  m.method = method;
  m.labels = std::move(labels);
  m.rows = rows.size();
  m.values.assign(p, std::vector<double>(p, 0.0));
  m.constant.assign(p, false);
  for (std::size_t a = 0; a < p; ++a) m.constant[a] = !(co[a][a] > 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    m.values[a][a] = 1.0;
    for (std::size_t b = a + 1; b < p; ++b) {
      double r = 0.0;
      if (!m.constant[a] && !m.constant[b]) r = std::clamp(co[a][b] / std::sqrt(co[a][a] * co[b][b]), -1.0, 1.0);
      m.values[a][b] = r;
      m.values[b][a] = r;
    }
  }
  return m;
}

CorrelationMatrix correlate(const std::vector<Candidate>& history, CorrelationMethod method) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : analysis_rows(history)) rows.emplace_back(r.begin(), r.end());
  return correlate_rows(std::move(rows), analysis_labels(), method);
}

Table correlation_table(const CorrelationMatrix& m) {
  Table t;
  t.header.push_back("variable");
  t.header.insert(t.header.end(), m.labels.begin(), m.labels.end());
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    std::vector<std::string> row{m.labels[i]};
    for (double v : m.values[i]) row.push_back(format_real(v));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::size_t count_dominance_violations(const std::vector<Candidate>& members) {
  std::size_t n = 0;
  for (const auto& a : members)
    for (const auto& b : members)
      if (&a != &b && dominates(a.record, b.record)) ++n;
  return n;
}

ParetoExport pareto_front_export(const std::vector<Candidate>& archive) {
  std::vector<Candidate> sorted = archive;
  std::sort(sorted.begin(), sorted.end(), [](const Candidate& a, const Candidate& b) {
    if (a.record.dsc_avg != b.record.dsc_avg) return a.record.dsc_avg > b.record.dsc_avg;
    if (a.record.hd95_avg != b.record.hd95_avg) return a.record.hd95_avg < b.record.hd95_avg;
    if (a.record.params != b.record.params) return a.record.params < b.record.params;
    return a.id < b.id;
  });
  ParetoExport out;
  out.table.header = {"id", "generation", "dsc_avg", "hd95_avg", "params", "flops", "scalar_fitness", "genotype"};
  for (const auto& c : sorted) {
    out.table.rows.push_back({std::to_string(c.id), std::to_string(c.generation), format_real(c.record.dsc_avg),
                              format_real(c.record.hd95_avg), std::to_string(c.record.params),
                              std::to_string(c.record.flops), format_real(c.record.scalar_fitness),
                              to_compact_record(c.genotype)});
  }
  out.dominance_violations = count_dominance_violations(sorted);
  return out;
}

std::vector<Candidate> pareto_front_of(const std::vector<Candidate>& history) {
  ParetoArchive archive;
  for (const auto& c : history) archive.insert(c);
  return archive.members();
}

Table curve_export(const std::vector<Candidate>& history) {
  struct Stats {
    std::size_t evaluations = 0;
    std::size_t ok = 0;
    double best_dsc = -std::numeric_limits<double>::infinity();
    double best_hd95 = std::numeric_limits<double>::infinity();
    double sum_dsc = 0.0;
    double sum_hd95 = 0.0;
    double best_fitness = -std::numeric_limits<double>::infinity();
  };
  std::map<int, Stats> per_gen;
  for (const auto& c : history) {
    Stats& s = per_gen[c.generation];
    ++s.evaluations;
    if (!c.record.ok()) continue;
    ++s.ok;
    s.best_dsc = std::max(s.best_dsc, c.record.dsc_avg);
    s.best_hd95 = std::min(s.best_hd95, c.record.hd95_avg);
    s.sum_dsc += c.record.dsc_avg;
    s.sum_hd95 += c.record.hd95_avg;
    s.best_fitness = std::max(s.best_fitness, c.record.scalar_fitness);
  }
  Table t;
  t.header = {"generation", "evaluations", "ok",       "gen_best_dsc", "gen_mean_dsc",
              "gen_best_hd95", "gen_mean_hd95", "best_dsc", "best_hd95", "best_fitness"};
  double run_dsc = -std::numeric_limits<double>::infinity();
  double run_hd95 = std::numeric_limits<double>::infinity();
  double run_fit = -std::numeric_limits<double>::infinity();
  for (const auto& [gen, s] : per_gen) {
    run_dsc = std::max(run_dsc, s.best_dsc);
    run_hd95 = std::min(run_hd95, s.best_hd95);
    run_fit = std::max(run_fit, s.best_fitness);
    const double n = static_cast<double>(s.ok);
    t.rows.push_back({std::to_string(gen), std::to_string(s.evaluations), std::to_string(s.ok),
                      real_or_empty(s.best_dsc), s.ok ? format_real(s.sum_dsc / n) : std::string(),
                      real_or_empty(s.best_hd95), s.ok ? format_real(s.sum_hd95 / n) : std::string(),
                      real_or_empty(run_dsc), real_or_empty(run_hd95), real_or_empty(run_fit)});
  }
  return t;
}

Table training_curves(const std::vector<Candidate>& history) {
  Table t;
  t.header = {"id", "generation", "epoch", "dsc", "hd95"};
  for (const auto& c : history)
    for (const auto& p : c.record.curve)
      t.rows.push_back({std::to_string(c.id), std::to_string(c.generation), std::to_string(p.epoch),
                        format_real(p.dsc), format_real(p.hd95)});
  return t;
}

}  // namespace resnas
