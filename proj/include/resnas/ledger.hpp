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
#include <map>
#include <string>
#include <vector>

#include "resnas/evaluator.hpp"

namespace resnas {

inline constexpr double kSecondsPerDay = 86400.0;

/// Accumulated evaluation cost, per candidate, per generation and in total.
class BudgetLedger {
 public:
  struct Entry {
    int generation = 0;
    std::uint64_t id = 0;
    double seconds = 0.0;
  };

  /// Negative or non-finite costs count as zero.
  void add(int generation, std::uint64_t id, double seconds);

  double total_seconds() const { return total_seconds_; }
  double device_days() const { return total_seconds_ / kSecondsPerDay; }
  std::size_t evaluations() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  const std::map<int, double>& per_generation() const { return per_generation_; }
  double generation_seconds(int generation) const;

  /// Plain-text totals plus one line per generation.
  std::string report() const;

 private:
  std::vector<Entry> entries_;
  std::map<int, double> per_generation_;
  double total_seconds_ = 0.0;
};

void budget_ledger_update(BudgetLedger& ledger, int generation, std::uint64_t id, const FitnessRecord& record);

}  // namespace resnas
