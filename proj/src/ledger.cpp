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
#include "resnas/ledger.hpp"

#include <cmath>

#include "resnas/text.hpp"

namespace resnas {

void BudgetLedger::add(int generation, std::uint64_t id, double seconds) {
  const double s = (std::isfinite(seconds) && seconds > 0.0) ? seconds : 0.0;
  entries_.push_back({generation, id, s});
  per_generation_[generation] += s;
  total_seconds_ += s;
}

double BudgetLedger::generation_seconds(int generation) const {
  const auto it = per_generation_.find(generation);
  return it == per_generation_.end() ? 0.0 : it->second;
}

std::string BudgetLedger::report() const {
  std::string out;
  out += "evaluations: " + std::to_string(entries_.size()) + "\n";
  out += "total_seconds: " + format_real(total_seconds_) + "\n";
  out += "device_days: " + format_real(device_days()) + "\n";
  for (const auto& [gen, s] : per_generation_)
    out += "generation " + std::to_string(gen) + ": " + format_real(s) + " s\n";
  return out;
}

void budget_ledger_update(BudgetLedger& ledger, int generation, std::uint64_t id, const FitnessRecord& record) {
  ledger.add(generation, id, record.eval_cost_seconds);
}

}  // namespace resnas
