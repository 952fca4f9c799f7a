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

// Analytic U-Net supernet planner: turns a genotype into an explicit layer graph
// with propagated shapes and exact parameter / FLOP counts.
//
// Supernet recipe (all knobs live in PlannerConfig):
//
//   encoder stage i = 1..n_s, width c_i = filter_base * 2^(i-1):
//     convs_per_block x [conv k x k -> c_i, activation]
//     attention: squeeze-excitation in every stage; self-attention only where the
//       stage's spatial side is <= self_attention_max_side
//     dropout(d_p)                      -> skip feature F_i
//     downsample (2x2 max pool)
//   bottleneck, width c_b = c_{n_s} / bottleneck_width_divisor:
//     one k x k conv branch per dilation rate, summed; activation;
//     self-attention when selected by the genotype (never squeeze-excitation)
//   decoder stage j = 1..n_s against skip F_s, s = n_s - j + 1:
//     2x nearest upsample; upsample_kernel conv -> c_s; activation
//     fusion with F_s (add | concat | weighted sum)
//     convs_per_block x [conv k x k -> c_s, activation]
//     residual scaling U <- alpha * U + (1 - alpha) * F_s
//   head: 1x1 conv -> num_classes; softmax.
//
// Counting conventions:
//   conv params  = k*k*c_in*c_out + c_out (bias everywhere, no normalization)
//   conv flops   = 2*k*k*c_in*c_out*H_out*W_out (1 MAC = 2 FLOPs)
//   activation / softmax   1 flop per output element
//   max pool 2x2           3 flops per output element
//   nearest upsample, dropout (inference), concat: 0 flops
//   add fusion             1 flop per output element
//   weighted-sum fusion    3 flops per output element, 2 parameters
//   dilated branch sum     (branches - 1) flops per output element
//   residual scaling       3 flops per output element
//   squeeze-excitation, r = se_reduction, c_r = max(1, c / r):
//     params = c*c_r + c_r + c_r*c + c
//     flops  = H*W*c (pool) + 2*c*c_r + 2*c_r*c + H*W*c (rescale)
//   self-attention over N = H*W positions (q, k, v and output 1x1 projections):
//     params = 4*(c*c + c)
//     flops  = 4 * 2*c*c*N + 2*N*N*c (scores) + 2*N*N*c (weighted values)

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "resnas/search_space.hpp"

namespace resnas {

class PlannerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Shape {
  int height = 0;
  int width = 0;
  int channels = 0;

  std::uint64_t elements() const {
    return static_cast<std::uint64_t>(height) * static_cast<std::uint64_t>(width) *
           static_cast<std::uint64_t>(channels);
  }
  bool operator==(const Shape&) const = default;
};

std::string to_string(const Shape& s);

enum class LayerKind : std::uint8_t {
  Conv,
  Downsample,
  Upsample,
  Attention,
  Fusion,
  Dropout,
  Activation,
  ResidualScale,
  OutputConv,
};
std::string_view to_string(LayerKind kind);

enum class Block : std::uint8_t { Encoder, Bottleneck, Decoder, Head };
std::string_view to_string(Block block);

inline constexpr int kNetworkInput = -1;

struct LayerSpec {
  std::string name;
  LayerKind kind = LayerKind::Conv;
  Block block = Block::Encoder;
  int stage_index = 0;      // 1-based within encoder/decoder; 0 for bottleneck and head
  std::vector<int> inputs;  // producer layer indices; kNetworkInput for the image
  Shape input_shape;        // shape of inputs[0]
  Shape output_shape;
  int kernel = 0;
  int channels_in = 0;
  int channels_out = 0;
  int dilation = 1;
  int pad_before = 0;  // same-size padding; even kernels pad one more after
  int pad_after = 0;
  std::uint64_t param_count = 0;
  std::uint64_t flop_count = 0;
  std::string detail;
};

struct PlannerConfig {
  int input_height = 128;
  int input_width = 128;
  int input_channels = 1;
  int num_classes = 4;
  int convs_per_block = 1;
  std::vector<int> dilation_rates{1, 2, 4};
  int se_reduction = 4;
  int self_attention_max_side = 32;
  int bottleneck_width_divisor = 2;
  int upsample_kernel = 3;

  std::vector<std::string> problems() const;
};

struct ArchitecturePlan {
  Genotype genotype;
  Shape input_shape;
  std::vector<LayerSpec> layers;
  std::uint64_t total_params = 0;
  std::uint64_t total_flops = 0;

  const Shape& output_shape() const { return layers.back().output_shape; }
  std::size_t count(LayerKind kind) const;
  std::size_t count(Block block) const;
};

/// Throws PlannerError for invalid planner configs or when a downsample chain
/// would reach a side below 1 px or an odd side.
ArchitecturePlan build_plan(const Genotype& g, const PlannerConfig& cfg = {});

std::uint64_t count_params(const ArchitecturePlan& plan);
std::uint64_t count_flops(const ArchitecturePlan& plan);

/// Graph and shape-chain audit. Empty means consistent.
std::vector<std::string> verify_plan(const ArchitecturePlan& plan);

/// One line per layer (index, name, kind, inputs, shapes, params, flops) plus totals.
std::string format_plan_report(const ArchitecturePlan& plan);

struct ResourceBudget {
  std::uint64_t max_params = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t max_flops = std::numeric_limits<std::uint64_t>::max();
};

struct Feasibility {
  bool feasible = true;
  std::uint64_t params_excess = 0;
  std::uint64_t flops_excess = 0;

  std::string describe() const;
  bool operator==(const Feasibility&) const = default;
};

Feasibility check_constraints(std::uint64_t params, std::uint64_t flops,
                              const ResourceBudget& budget);
Feasibility check_constraints(const ArchitecturePlan& plan, const ResourceBudget& budget);

}  // namespace resnas
