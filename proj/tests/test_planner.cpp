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
#include <gtest/gtest.h>

#include "resnas/planner.hpp"
#include "resnas/random.hpp"

namespace resnas {
namespace {

using u64 = std::uint64_t;

// Independent closed-form totals for square inputs, written from the counting
// conventions rather than from the layer builder.
struct Totals {
  u64 params = 0;
  u64 flops = 0;
};

Totals oracle_totals(const Genotype& g, const PlannerConfig& cfg) {
  Totals t;
  const u64 k2 = static_cast<u64>(g.kernel_size) * static_cast<u64>(g.kernel_size);
  const int n = g.num_stages;
  auto conv = [&](u64 kk, u64 cin, u64 cout, u64 side) {
    t.params += kk * cin * cout + cout;
    t.flops += 2 * kk * cin * cout * side * side;
  };
  auto se = [&](u64 c, u64 side) {
    const u64 cr = std::max<u64>(1, c / static_cast<u64>(cfg.se_reduction));
    t.params += c * cr + cr + cr * c + c;
    t.flops += side * side * c + 2 * c * cr + 2 * cr * c + side * side * c;
  };
  auto sa = [&](u64 c, u64 side) {
    const u64 np = side * side;
    t.params += 4 * (c * c + c);
    t.flops += 8 * c * c * np + 4 * np * np * c;
  };
  std::vector<u64> width(static_cast<std::size_t>(n) + 1);
  std::vector<u64> side(static_cast<std::size_t>(n) + 2);
  width[0] = static_cast<u64>(cfg.input_channels);
  side[1] = static_cast<u64>(cfg.input_height);
  for (int i = 1; i <= n; ++i) {
    width[static_cast<std::size_t>(i)] = static_cast<u64>(g.filter_base) << (i - 1);
    side[static_cast<std::size_t>(i) + 1] = side[static_cast<std::size_t>(i)] / 2;
  }
  // Encoder.
  for (int i = 1; i <= n; ++i) {
    const u64 c = width[static_cast<std::size_t>(i)];
    const u64 s = side[static_cast<std::size_t>(i)];
    u64 cin = width[static_cast<std::size_t>(i) - 1];
    for (int b = 0; b < cfg.convs_per_block; ++b) {
      conv(k2, cin, c, s);
      t.flops += s * s * c;
      cin = c;
    }
    if (g.attention == Attention::SqueezeExcitation) se(c, s);
    else if (s <= static_cast<u64>(cfg.self_attention_max_side)) sa(c, s);
    t.flops += 3 * (s / 2) * (s / 2) * c;
  }
  // Bottleneck.
  const u64 sb = side[static_cast<std::size_t>(n) + 1];
  const u64 cn = width[static_cast<std::size_t>(n)];
  const u64 cb = cn / static_cast<u64>(cfg.bottleneck_width_divisor);
  const u64 branches = cfg.dilation_rates.size();
  for (u64 b = 0; b < branches; ++b) conv(k2, cn, cb, sb);
  t.flops += (branches - 1) * sb * sb * cb + sb * sb * cb;
  if (g.attention == Attention::SelfAttention) sa(cb, sb);
  // Decoder.
  u64 prev = cb;
  const u64 uk2 = static_cast<u64>(cfg.upsample_kernel) * static_cast<u64>(cfg.upsample_kernel);
  for (int s_idx = n; s_idx >= 1; --s_idx) {
    const u64 c = width[static_cast<std::size_t>(s_idx)];
    const u64 s = side[static_cast<std::size_t>(s_idx)];
    conv(uk2, prev, c, s);
    t.flops += s * s * c;
    u64 cin = c;
    switch (g.fusion) {
      case Fusion::Add: t.flops += s * s * c; break;
      case Fusion::Concat: cin = 2 * c; break;
      case Fusion::WeightedSum:
        t.params += 2;
        t.flops += 3 * s * s * c;
        break;
    }
    for (int b = 0; b < cfg.convs_per_block; ++b) {
      conv(k2, cin, c, s);
      t.flops += s * s * c;
      cin = c;
    }
    t.flops += 3 * s * s * c;
    prev = c;
  }
  // Head.
  const u64 s1 = side[1];
  conv(1, width[1], static_cast<u64>(cfg.num_classes), s1);
  t.flops += s1 * s1 * static_cast<u64>(cfg.num_classes);
  return t;
}

TEST(Planner, ReferenceGenotypeTotals) {
  const ArchitecturePlan plan = build_plan(reference_genotype());
  EXPECT_EQ(plan.total_params, 6798346u);
  EXPECT_EQ(plan.total_flops, 27133788160u);
  EXPECT_GE(plan.total_params, 1790000u);
  EXPECT_LE(plan.total_params, 7160000u);
  EXPECT_GE(plan.total_flops, 7280000000u);
  EXPECT_LE(plan.total_flops, 29120000000u);
  EXPECT_EQ(plan.output_shape(), (Shape{128, 128, 4}));
  EXPECT_TRUE(verify_plan(plan).empty());
}

TEST(Planner, MatchesClosedFormOracle) {
  SeededRandom rng(31);
  for (int i = 0; i < 300; ++i) {
    const Genotype g = sample_genotype(SearchSpace{}, rng);
    const ArchitecturePlan plan = build_plan(g);
    const Totals t = oracle_totals(g, PlannerConfig{});
    ASSERT_EQ(plan.total_params, t.params) << to_compact_record(g);
    ASSERT_EQ(plan.total_flops, t.flops) << to_compact_record(g);
  }
}

TEST(Planner, MatchesOracleWithTwoConvsPerBlock) {
  PlannerConfig cfg;
  cfg.convs_per_block = 2;
  cfg.dilation_rates = {1, 3};
  SeededRandom rng(37);
  for (int i = 0; i < 100; ++i) {
    const Genotype g = sample_genotype(SearchSpace{}, rng);
    const Totals t = oracle_totals(g, cfg);
    const ArchitecturePlan plan = build_plan(g, cfg);
    ASSERT_EQ(plan.total_params, t.params) << to_compact_record(g);
    ASSERT_EQ(plan.total_flops, t.flops) << to_compact_record(g);
  }
}

TEST(Planner, TotalsEqualLayerSums) {
  SeededRandom rng(41);
  for (int i = 0; i < 50; ++i) {
    const ArchitecturePlan plan = build_plan(sample_genotype(SearchSpace{}, rng));
    EXPECT_EQ(count_params(plan), plan.total_params);
    EXPECT_EQ(count_flops(plan), plan.total_flops);
    EXPECT_TRUE(verify_plan(plan).empty());
  }
}

TEST(Planner, MonotoneInFilterBaseAndStages) {
  SeededRandom rng(43);
  for (int sweep = 0; sweep < 25; ++sweep) {
    Genotype g = sample_genotype(SearchSpace{}, rng);
    u64 last_p = 0, last_f = 0;
    for (int f = 32; f <= 127; ++f) {
      g.filter_base = f;
      const auto plan = build_plan(g);
      EXPECT_GE(plan.total_params, last_p);
      EXPECT_GE(plan.total_flops, last_f);
      last_p = plan.total_params;
      last_f = plan.total_flops;
    }
    last_p = last_f = 0;
    for (int n = 2; n <= 4; ++n) {
      g.num_stages = n;
      const auto plan = build_plan(g);
      EXPECT_GE(plan.total_params, last_p);
      EXPECT_GE(plan.total_flops, last_f);
      last_p = plan.total_params;
      last_f = plan.total_flops;
    }
  }
}

TEST(Planner, FewerLayersWithFewerStages) {
  Genotype g = reference_genotype();
  g.num_stages = 2;
  const auto small = build_plan(g);
  g.num_stages = 4;
  const auto large = build_plan(g);
  EXPECT_LT(small.layers.size(), large.layers.size());
  EXPECT_LT(small.total_params, large.total_params);
}

TEST(Planner, EvenKernelPadsAsymmetrically) {
  Genotype g = reference_genotype();
  g.kernel_size = 4;
  const auto plan = build_plan(g);
  const LayerSpec& first = plan.layers.front();
  EXPECT_EQ(first.kind, LayerKind::Conv);
  EXPECT_EQ(first.pad_before, 1);
  EXPECT_EQ(first.pad_after, 2);
  EXPECT_EQ(first.output_shape.height, 128);
}

TEST(Planner, FusionModesShapeTheGraph) {
  Genotype g = reference_genotype();
  g.fusion = Fusion::Concat;
  const auto concat = build_plan(g);
  g.fusion = Fusion::Add;
  const auto add = build_plan(g);
  EXPECT_GT(concat.total_params, add.total_params);
  EXPECT_EQ(concat.count(LayerKind::Fusion), 4u);  // three skips plus the bottleneck sum
  EXPECT_EQ(add.count(LayerKind::ResidualScale), 3u);
  EXPECT_TRUE(verify_plan(concat).empty());
}

TEST(Planner, AttentionPlacement) {
  Genotype g = reference_genotype();
  g.attention = Attention::SqueezeExcitation;
  EXPECT_EQ(build_plan(g).count(LayerKind::Attention), 3u);  // every encoder stage
  g.attention = Attention::SelfAttention;
  EXPECT_EQ(build_plan(g).count(LayerKind::Attention), 2u);  // 32 px stage and bottleneck
}

TEST(Planner, RejectsBadConfigAndIndivisibleInput) {
  PlannerConfig cfg;
  cfg.dilation_rates.clear();
  EXPECT_THROW(build_plan(reference_genotype(), cfg), PlannerError);
  PlannerConfig odd;
  odd.input_height = odd.input_width = 100;
  Genotype g = reference_genotype();
  g.num_stages = 4;
  EXPECT_THROW(build_plan(g, odd), PlannerError);
}

TEST(Planner, ReportListsEveryLayerAndTotals) {
  const auto plan = build_plan(reference_genotype());
  const std::string report = format_plan_report(plan);
  EXPECT_NE(report.find("total_params 6798346"), std::string::npos);
  EXPECT_NE(report.find("total_flops 27133788160"), std::string::npos);
  EXPECT_NE(report.find("head.conv"), std::string::npos);
}

TEST(Constraints, ExcessIsReported) {
  ResourceBudget b;
  b.max_params = 100;
  b.max_flops = 1000;
  const Feasibility f = check_constraints(150, 900, b);
  EXPECT_FALSE(f.feasible);
  EXPECT_EQ(f.params_excess, 50u);
  EXPECT_EQ(f.flops_excess, 0u);
  EXPECT_NE(f.describe().find("params over budget by 50"), std::string::npos);
  EXPECT_TRUE(check_constraints(100, 1000, b).feasible);
  EXPECT_TRUE(check_constraints(build_plan(reference_genotype()), ResourceBudget{}).feasible);
}

}  // namespace
}  // namespace resnas
