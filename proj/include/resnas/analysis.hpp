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

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "resnas/evolution.hpp"

namespace resnas {

/// Comma-separated table with a header row. Fields containing a comma, quote
/// or newline are quoted, with embedded quotes doubled.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  bool operator==(const Table&) const = default;
};

std::string write_csv(const Table& table);
/// Throws ParseError (with line number) on unterminated quotes or ragged rows.
Table read_csv(std::string_view text);

class InsufficientData : public std::runtime_error {
 public:
  InsufficientData(std::size_t have, std::size_t need);
  std::size_t have() const { return have_; }

 private:
  std::size_t have_;
};

enum class CorrelationMethod : std::uint8_t { Pearson, Spearman };
std::string_view to_string(CorrelationMethod m);
CorrelationMethod parse_correlation_method(std::string_view text);

inline constexpr std::size_t kAnalysisColumns = kGeneCount + 4;
using AnalysisRow = std::array<double, kAnalysisColumns>;

/// The eight gene names in encode_numeric order, then dsc_avg, hd95_avg, params, flops.
std::vector<std::string> analysis_labels();

/// One row per Ok history entry with finite metrics.
std::vector<AnalysisRow> analysis_rows(const std::vector<Candidate>& history);

struct CorrelationMatrix {
  CorrelationMethod method = CorrelationMethod::Pearson;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;  // symmetric, unit diagonal
  std::vector<bool> constant;               // zero-variance columns; their off-diagonal entries are 0
  std::size_t rows = 0;
};

/// Rows are sorted before accumulation, so the result does not depend on row
/// order. Co-moments use a one-pass (Welford) update. Spearman applies
/// average-rank transforms first. Throws InsufficientData below 3 rows.
CorrelationMatrix correlate_rows(std::vector<std::vector<double>> rows, std::vector<std::string> labels,
                                 CorrelationMethod method = CorrelationMethod::Pearson);
CorrelationMatrix correlate(const std::vector<Candidate>& history,
                            CorrelationMethod method = CorrelationMethod::Pearson);

/// Square labeled table; first column holds the row label.
Table correlation_table(const CorrelationMatrix& m);

/// Number of ordered pairs (a, b) in which a dominates b.
std::size_t count_dominance_violations(const std::vector<Candidate>& members);

struct ParetoExport {
  Table table;
  std::size_t dominance_violations = 0;
};

/// Rows sorted by dsc descending (then hd95, params, id ascending), with a
/// dominance re-check over the exported set.
ParetoExport pareto_front_export(const std::vector<Candidate>& archive);

/// Non-dominated subset of the Ok history entries, one per genotype.
std::vector<Candidate> pareto_front_of(const std::vector<Candidate>& history);

/// Per generation: evaluation counts, best and mean dsc/hd95 of that
/// generation's Ok evaluations, and running bests over all generations so far
/// (best_dsc, best_hd95, best_fitness).
Table curve_export(const std::vector<Candidate>& history);

/// Worker-supplied training curves: id, generation, epoch, dsc, hd95.
Table training_curves(const std::vector<Candidate>& history);

}  // namespace resnas
