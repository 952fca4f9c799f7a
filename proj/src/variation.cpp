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

#include "resnas/variation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace resnas {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

template <typename Enum>
Enum resample_choice(const std::vector<Enum>& choices, RandomSource& rng) {
  const auto i = rng.uniform_int(0, static_cast<std::int64_t>(choices.size()) - 1);
  return choices[static_cast<std::size_t>(i)];
}

double jitter(double value, const RealRange& range, double fraction, RandomSource& rng) {
  const double half_width = fraction * range.width();
  const double delta = (2.0 * rng.uniform01() - 1.0) * half_width;
  return std::clamp(value + delta, range.lo, range.hi);
}

}  // namespace

std::vector<std::string> VariationConfig::problems() const {
  std::vector<std::string> out;
  if (!is_probability(crossover_rate)) out.emplace_back("crossover_rate must lie in [0,1]");
  if (!is_probability(mutation_rate)) out.emplace_back("mutation_rate must lie in [0,1]");
  if (!is_probability(gene_swap_prob)) out.emplace_back("gene_swap_prob must lie in [0,1]");
  if (!(jitter_fraction > 0.0) || !std::isfinite(jitter_fraction))
    out.emplace_back("jitter_fraction must be > 0");
  if (max_mutated_genes < 1 || max_mutated_genes > static_cast<int>(kGeneCount))
    out.emplace_back("max_mutated_genes must lie in [1,8]");
  return out;
}

Genotype uniform_crossover(const Genotype& a, const Genotype& b, const VariationConfig& cfg,
                           RandomSource& rng) {
  auto from_b = [&] { return rng.uniform01() < cfg.gene_swap_prob; };
  Genotype child = a;
  if (from_b()) child.filter_base = b.filter_base;
  if (from_b()) child.kernel_size = b.kernel_size;
  if (from_b()) child.num_stages = b.num_stages;
  if (from_b()) child.dropout_rate = b.dropout_rate;
  if (from_b()) child.attention = b.attention;
  if (from_b()) child.fusion = b.fusion;
  if (from_b()) child.activation = b.activation;

  const double lambda = rng.uniform01();
  const double blended = lambda * a.residual_scale + (1.0 - lambda) * b.residual_scale;
  // Rounding can leave the convex combination an ulp outside the parents.
  child.residual_scale = std::clamp(blended, std::min(a.residual_scale, b.residual_scale),
                                    std::max(a.residual_scale, b.residual_scale));
  return child;
}

Genotype mutate(const Genotype& g, const SearchSpace& space, const VariationConfig& cfg,
                RandomSource& rng) {
  const int max_genes = std::clamp(cfg.max_mutated_genes, 1, static_cast<int>(kGeneCount));
  const auto count = static_cast<std::size_t>(rng.uniform_int(1, max_genes));

  std::array<Gene, kGeneCount> order{};
  for (std::size_t i = 0; i < kGeneCount; ++i) order[i] = static_cast<Gene>(i);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(kGeneCount) - 1));
    std::swap(order[i], order[j]);
  }

  Genotype out = g;
  for (std::size_t i = 0; i < count; ++i) {
    switch (order[i]) {
      case Gene::FilterBase:
        out.filter_base = static_cast<int>(rng.uniform_int(space.filter_base.lo, space.filter_base.hi));
        break;
      case Gene::KernelSize:
        out.kernel_size = static_cast<int>(rng.uniform_int(space.kernel_size.lo, space.kernel_size.hi));
        break;
      case Gene::NumStages:
        out.num_stages = static_cast<int>(rng.uniform_int(space.num_stages.lo, space.num_stages.hi));
        break;
      case Gene::DropoutRate:
        out.dropout_rate = jitter(out.dropout_rate, space.dropout_rate, cfg.jitter_fraction, rng);
        break;
      case Gene::Attention:
        out.attention = resample_choice(space.attention, rng);
        break;
      case Gene::Fusion:
        out.fusion = resample_choice(space.fusion, rng);
        break;
      case Gene::Activation:
        out.activation = resample_choice(space.activation, rng);
        break;
      case Gene::ResidualScale:
        out.residual_scale = jitter(out.residual_scale, space.residual_scale, cfg.jitter_fraction, rng);
        break;
    }
  }
  return out;
}

Genotype make_offspring(const Genotype& a, const Genotype& b, const VariationConfig& cfg,
                        const SearchSpace& space, RandomSource& rng) {
  Genotype child = rng.uniform01() < cfg.crossover_rate ? uniform_crossover(a, b, cfg, rng) : a;
  if (rng.uniform01() < cfg.mutation_rate) child = mutate(child, space, cfg, rng);
  return child;
}

}  // namespace resnas
