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

// JSON forms of the engine's value types, shared by the worker protocol and
// the history files.

#pragma once

#include <json.hpp>

#include "resnas/evaluator.hpp"
#include "resnas/search_space.hpp"

namespace resnas {

nlohmann::json genotype_to_json(const Genotype& g);
/// Strict: exactly the eight record keys, typed values. Throws ParseError.
Genotype genotype_from_json(const nlohmann::json& j);

nlohmann::json curve_to_json(const std::vector<CurvePoint>& curve);
std::vector<CurvePoint> curve_from_json(const nlohmann::json& j);

nlohmann::json per_class_to_json(const PerClassScores& p);
PerClassScores per_class_from_json(const nlohmann::json& j);

/// Non-finite scalar_fitness is written as null and read back as kFailedFitness.
nlohmann::json record_to_json(const FitnessRecord& r);
FitnessRecord record_from_json(const nlohmann::json& j);

}  // namespace resnas
