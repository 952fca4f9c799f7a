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

#include <string>
#include <vector>

#include "resnas/random.hpp"
#include "resnas/search_space.hpp"

namespace resnas {

struct VariationConfig {
  double crossover_rate = 0.9;
  double mutation_rate = 0.3;
  double gene_swap_prob = 0.5;
  // Half-width of continuous-gene jitter as a fraction of the gene's interval.
  double jitter_fraction = 0.25;
  // Mutation edits m genes, m uniform in [1, max_mutated_genes].
  int max_mutated_genes = 2;

  std::vector<std::string> problems() const;
};

// Draw order (relied on by scripted tests):
//   uniform_crossover: one uniform01() per gene for the seven non-alpha genes in
//     canonical order (< gene_swap_prob takes parent b), then one uniform01() for
//     the blend weight lambda applied to parent a.
//   mutate: uniform_int(1, m_max) for the gene count, a partial Fisher-Yates
//     shuffle over the eight genes (uniform_int(i, 7) per pick), then one draw
//     per picked gene in pick order: uniform_int over the range / choice index
//     for discrete genes, uniform01() for the jitter of continuous genes.
//   make_offspring: uniform01() crossover gate, crossover draws if taken,
//     uniform01() mutation gate, mutation draws if taken.

Genotype uniform_crossover(const Genotype& a, const Genotype& b, const VariationConfig& cfg,
                           RandomSource& rng);

Genotype mutate(const Genotype& g, const SearchSpace& space, const VariationConfig& cfg,
                RandomSource& rng);

Genotype make_offspring(const Genotype& a, const Genotype& b, const VariationConfig& cfg,
                        const SearchSpace& space, RandomSource& rng);

}  // namespace resnas
