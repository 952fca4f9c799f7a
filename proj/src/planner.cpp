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

#include "resnas/planner.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "resnas/text.hpp"

namespace resnas {

namespace {

using u64 = std::uint64_t;

u64 conv_params(int k, int c_in, int c_out) {
  return static_cast<u64>(k) * k * c_in * c_out + static_cast<u64>(c_out);
}

u64 conv_flops(int k, int c_in, int c_out, const Shape& out) {
  return 2ULL * k * k * static_cast<u64>(c_in) * c_out * out.height * out.width;
}

class PlanBuilder {
 public:
  PlanBuilder(ArchitecturePlan& plan, const PlannerConfig& cfg) : plan_(plan), cfg_(cfg) {}

  const Shape& shape_of(int index) const {
    return index == kNetworkInput ? plan_.input_shape
                                  : plan_.layers.at(static_cast<std::size_t>(index)).output_shape;
  }

  void at(Block block, int stage) {
    block_ = block;
    stage_ = stage;
  }

  int conv(const std::string& name, int src, int k, int c_out, int dilation = 1,
           LayerKind kind = LayerKind::Conv) {
    LayerSpec l = base(name, kind, {src});
    const int total_pad = dilation * (k - 1);
    l.kernel = k;
    l.dilation = dilation;
    l.pad_before = total_pad / 2;
    l.pad_after = total_pad - l.pad_before;
    l.channels_in = l.input_shape.channels;
    l.channels_out = c_out;
    l.output_shape = {l.input_shape.height, l.input_shape.width, c_out};
    l.param_count = conv_params(k, l.channels_in, c_out);
    l.flop_count = conv_flops(k, l.channels_in, c_out, l.output_shape);
    if (dilation > 1) l.detail = "dilation=" + std::to_string(dilation);
    return push(std::move(l));
  }

  int activation(const std::string& name, int src, std::string_view fn) {
    LayerSpec l = same_shape(name, LayerKind::Activation, src);
    l.flop_count = l.output_shape.elements();
    l.detail = std::string(fn);
    return push(std::move(l));
  }

  int dropout(const std::string& name, int src, double rate) {
    LayerSpec l = same_shape(name, LayerKind::Dropout, src);
    l.detail = "p=" + format_real(rate);
    return push(std::move(l));
  }

  int squeeze_excitation(const std::string& name, int src) {
    LayerSpec l = same_shape(name, LayerKind::Attention, src);
    const u64 c = static_cast<u64>(l.input_shape.channels);
    const u64 reduced = std::max<u64>(1, c / static_cast<u64>(cfg_.se_reduction));
    const u64 hw = static_cast<u64>(l.input_shape.height) * l.input_shape.width;
    l.param_count = c * reduced + reduced + reduced * c + c;
    l.flop_count = hw * c + 2 * c * reduced + 2 * reduced * c + hw * c;
    l.detail = "squeeze_excitation r=" + std::to_string(cfg_.se_reduction);
    return push(std::move(l));
  }

  int self_attention(const std::string& name, int src) {
    LayerSpec l = same_shape(name, LayerKind::Attention, src);
    const u64 c = static_cast<u64>(l.input_shape.channels);
    const u64 n = static_cast<u64>(l.input_shape.height) * l.input_shape.width;
    l.param_count = 4 * (c * c + c);
    l.flop_count = 4 * 2 * c * c * n + 2 * n * n * c + 2 * n * n * c;
    l.detail = "self_attention";
    return push(std::move(l));
  }

  int downsample(const std::string& name, int src) {
    LayerSpec l = base(name, LayerKind::Downsample, {src});
    const Shape& in = l.input_shape;
    if (in.height < 2 || in.width < 2 || in.height % 2 != 0 || in.width % 2 != 0) {
      throw PlannerError("downsample of " + to_string(in) + " would leave a side below 1 px or"
                         " drop an odd row/column");
    }
    l.kernel = 2;
    l.output_shape = {in.height / 2, in.width / 2, in.channels};
    l.flop_count = 3 * l.output_shape.elements();
    l.detail = "max_pool 2x2";
    return push(std::move(l));
  }

  int upsample(const std::string& name, int src) {
    LayerSpec l = base(name, LayerKind::Upsample, {src});
    l.output_shape = {l.input_shape.height * 2, l.input_shape.width * 2, l.input_shape.channels};
    l.detail = "nearest 2x";
    return push(std::move(l));
  }

  int fusion(const std::string& name, std::vector<int> srcs, std::string_view mode) {
    LayerSpec l = base(name, LayerKind::Fusion, std::move(srcs));
    l.detail = std::string(mode);
    if (mode == "concat") {
      int channels = 0;
      for (int s : l.inputs) channels += shape_of(s).channels;
      l.output_shape = {l.input_shape.height, l.input_shape.width, channels};
    } else {
      l.output_shape = l.input_shape;
      const u64 e = l.output_shape.elements();
      if (mode == "add") {
        l.flop_count = e;
      } else if (mode == "weighted_sum") {
        l.param_count = 2;
        l.flop_count = 3 * e;
      } else {  // "sum" of dilated branches
        l.flop_count = (l.inputs.size() - 1) * e;
      }
    }
    return push(std::move(l));
  }

  int residual_scale(const std::string& name, int decoded, int skip, double alpha) {
    if (shape_of(decoded) != shape_of(skip)) {
      throw PlannerError("residual scaling needs matching shapes, got " + to_string(shape_of(decoded)) +
                         " and " + to_string(shape_of(skip)));
    }
    LayerSpec l = base(name, LayerKind::ResidualScale, {decoded, skip});
    l.output_shape = l.input_shape;
    l.flop_count = 3 * l.output_shape.elements();
    l.detail = "alpha=" + format_real(alpha);
    return push(std::move(l));
  }

 private:
  LayerSpec base(const std::string& name, LayerKind kind, std::vector<int> inputs) {
    LayerSpec l;
    l.name = name;
    l.kind = kind;
    l.block = block_;
    l.stage_index = stage_;
    l.inputs = std::move(inputs);
    l.input_shape = shape_of(l.inputs.front());
    return l;
  }

  LayerSpec same_shape(const std::string& name, LayerKind kind, int src) {
    LayerSpec l = base(name, kind, {src});
    l.output_shape = l.input_shape;
    return l;
  }

  int push(LayerSpec l) {
    plan_.layers.push_back(std::move(l));
    return static_cast<int>(plan_.layers.size()) - 1;
  }

  ArchitecturePlan& plan_;
  const PlannerConfig& cfg_;
  Block block_ = Block::Encoder;
  int stage_ = 0;
};

std::string_view activation_fn(Activation a) { return to_string(a); }

std::string_view fusion_mode(Fusion f) { return to_string(f); }

}  // namespace

std::string to_string(const Shape& s) {
  return std::to_string(s.height) + "x" + std::to_string(s.width) + "x" + std::to_string(s.channels);
}

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Conv: return "conv";
    case LayerKind::Downsample: return "downsample";
    case LayerKind::Upsample: return "upsample";
    case LayerKind::Attention: return "attention";
    case LayerKind::Fusion: return "fusion";
    case LayerKind::Dropout: return "dropout";
    case LayerKind::Activation: return "activation";
    case LayerKind::ResidualScale: return "residual_scale";
    case LayerKind::OutputConv: return "output_conv";
  }
  return "?";
}

std::string_view to_string(Block block) {
  switch (block) {
    case Block::Encoder: return "encoder";
    case Block::Bottleneck: return "bottleneck";
    case Block::Decoder: return "decoder";
    case Block::Head: return "head";
  }
  return "?";
}

std::vector<std::string> PlannerConfig::problems() const {
  std::vector<std::string> out;
  if (input_height < 1 || input_width < 1 || input_channels < 1)
    out.emplace_back("input dimensions must be positive");
  if (num_classes < 1) out.emplace_back("num_classes must be >= 1");
  if (convs_per_block < 1) out.emplace_back("convs_per_block must be >= 1");
  if (dilation_rates.empty()) out.emplace_back("dilation_rates must not be empty");
  for (int r : dilation_rates)
    if (r < 1) out.emplace_back("dilation rates must be >= 1");
  if (se_reduction < 1) out.emplace_back("se_reduction must be >= 1");
  if (self_attention_max_side < 1) out.emplace_back("self_attention_max_side must be >= 1");
  if (bottleneck_width_divisor < 1) out.emplace_back("bottleneck_width_divisor must be >= 1");
  if (upsample_kernel < 1) out.emplace_back("upsample_kernel must be >= 1");
  return out;
}

std::size_t ArchitecturePlan::count(LayerKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(layers.begin(), layers.end(), [&](const LayerSpec& l) { return l.kind == kind; }));
}

std::size_t ArchitecturePlan::count(Block block) const {
  return static_cast<std::size_t>(
      std::count_if(layers.begin(), layers.end(), [&](const LayerSpec& l) { return l.block == block; }));
}

ArchitecturePlan build_plan(const Genotype& g, const PlannerConfig& cfg) {
  if (auto p = cfg.problems(); !p.empty()) throw PlannerError("planner config: " + p.front());
  if (g.num_stages < 1 || g.filter_base < 1 || g.kernel_size < 1) {
    throw PlannerError("genotype has non-positive structural genes");
  }

  ArchitecturePlan plan;
  plan.genotype = g;
  plan.input_shape = {cfg.input_height, cfg.input_width, cfg.input_channels};
  PlanBuilder b(plan, cfg);
  const auto act = activation_fn(g.activation);
  const int n = g.num_stages;

  int cur = kNetworkInput;
  std::vector<int> skips;
  for (int i = 1; i <= n; ++i) {
    b.at(Block::Encoder, i);
    const std::string prefix = "enc" + std::to_string(i) + ".";
    const int width = g.filter_base << (i - 1);
    for (int r = 1; r <= cfg.convs_per_block; ++r) {
      cur = b.conv(prefix + "conv" + std::to_string(r), cur, g.kernel_size, width);
      cur = b.activation(prefix + "act" + std::to_string(r), cur, act);
    }
    const Shape& s = b.shape_of(cur);
    if (g.attention == Attention::SqueezeExcitation) {
      cur = b.squeeze_excitation(prefix + "se", cur);
    } else if (s.height <= cfg.self_attention_max_side && s.width <= cfg.self_attention_max_side) {
      cur = b.self_attention(prefix + "self_attn", cur);
    }
    cur = b.dropout(prefix + "dropout", cur, g.dropout_rate);
    skips.push_back(cur);
    cur = b.downsample(prefix + "pool", cur);
  }

  b.at(Block::Bottleneck, 0);
  const int deepest = g.filter_base << (n - 1);
  const int bottleneck_width = std::max(1, deepest / cfg.bottleneck_width_divisor);
  std::vector<int> branches;
  for (int rate : cfg.dilation_rates) {
    branches.push_back(b.conv("bottleneck.branch_d" + std::to_string(rate), cur, g.kernel_size,
                              bottleneck_width, rate));
  }
  cur = branches.size() == 1 ? branches.front() : b.fusion("bottleneck.sum", branches, "sum");
  cur = b.activation("bottleneck.act", cur, act);
  if (g.attention == Attention::SelfAttention) cur = b.self_attention("bottleneck.self_attn", cur);

  for (int j = 1; j <= n; ++j) {
    b.at(Block::Decoder, j);
    const std::string prefix = "dec" + std::to_string(j) + ".";
    const int skip = skips[static_cast<std::size_t>(n - j)];
    const int width = b.shape_of(skip).channels;
    cur = b.upsample(prefix + "upsample", cur);
    if (b.shape_of(cur).height != b.shape_of(skip).height ||
        b.shape_of(cur).width != b.shape_of(skip).width) {
      throw PlannerError("decoder stage " + std::to_string(j) + " cannot align " +
                         to_string(b.shape_of(cur)) + " with skip " + to_string(b.shape_of(skip)));
    }
    cur = b.conv(prefix + "up_conv", cur, cfg.upsample_kernel, width);
    cur = b.activation(prefix + "up_act", cur, act);
    cur = b.fusion(prefix + "fuse", {cur, skip}, fusion_mode(g.fusion));
    for (int r = 1; r <= cfg.convs_per_block; ++r) {
      cur = b.conv(prefix + "conv" + std::to_string(r), cur, g.kernel_size, width);
      cur = b.activation(prefix + "act" + std::to_string(r), cur, act);
    }
    cur = b.residual_scale(prefix + "residual", cur, skip, g.residual_scale);
  }

  b.at(Block::Head, 0);
  cur = b.conv("head.conv", cur, 1, cfg.num_classes, 1, LayerKind::OutputConv);
  b.activation("head.softmax", cur, "softmax");

  plan.total_params = count_params(plan);
  plan.total_flops = count_flops(plan);
  return plan;
}

std::uint64_t count_params(const ArchitecturePlan& plan) {
  return std::accumulate(plan.layers.begin(), plan.layers.end(), u64{0},
                         [](u64 acc, const LayerSpec& l) { return acc + l.param_count; });
}

std::uint64_t count_flops(const ArchitecturePlan& plan) {
  return std::accumulate(plan.layers.begin(), plan.layers.end(), u64{0},
                         [](u64 acc, const LayerSpec& l) { return acc + l.flop_count; });
}

std::vector<std::string> verify_plan(const ArchitecturePlan& plan) {
  std::vector<std::string> issues;
  auto shape_of = [&](int idx) -> const Shape& {
    return idx == kNetworkInput ? plan.input_shape : plan.layers[static_cast<std::size_t>(idx)].output_shape;
  };
  for (std::size_t i = 0; i < plan.layers.size(); ++i) {
    const LayerSpec& l = plan.layers[i];
    auto fail = [&](const std::string& why) { issues.push_back(l.name + ": " + why); };
    if (l.inputs.empty()) {
      fail("no inputs");
      continue;
    }
    bool edges_ok = true;
    for (int src : l.inputs) {
      if (src != kNetworkInput && (src < 0 || static_cast<std::size_t>(src) >= i)) edges_ok = false;
    }
    if (!edges_ok) {
      fail("input edge does not point to an earlier layer");
      continue;
    }
    if (shape_of(l.inputs.front()) != l.input_shape) fail("input shape differs from producer output");
    const Shape& in = l.input_shape;
    const Shape& out = l.output_shape;
    switch (l.kind) {
      case LayerKind::Conv:
      case LayerKind::OutputConv:
        if (in.channels != l.channels_in || out.channels != l.channels_out ||
            out.height != in.height || out.width != in.width)
          fail("conv shape mismatch");
        if (l.param_count != conv_params(l.kernel, l.channels_in, l.channels_out))
          fail("conv parameter count off formula");
        if (l.flop_count != conv_flops(l.kernel, l.channels_in, l.channels_out, out))
          fail("conv flop count off formula");
        break;
      case LayerKind::Downsample:
        if (out != Shape{in.height / 2, in.width / 2, in.channels}) fail("downsample shape");
        break;
      case LayerKind::Upsample:
        if (out != Shape{in.height * 2, in.width * 2, in.channels}) fail("upsample shape");
        break;
      case LayerKind::Attention:
      case LayerKind::Dropout:
      case LayerKind::Activation:
        if (out != in) fail("shape-preserving layer changed shape");
        break;
      case LayerKind::Fusion: {
        int channels = 0;
        for (int src : l.inputs) {
          const Shape& s = shape_of(src);
          if (s.height != in.height || s.width != in.width) fail("fusion spatial mismatch");
          if (l.detail != "concat" && s != in) fail("fusion operands differ in shape");
          channels += s.channels;
        }
        const Shape expect{in.height, in.width, l.detail == "concat" ? channels : in.channels};
        if (out != expect) fail("fusion output shape");
        if (l.detail == "weighted_sum" && l.param_count != 2) fail("weighted sum must carry 2 weights");
        break;
      }
      case LayerKind::ResidualScale:
        if (l.inputs.size() != 2 || shape_of(l.inputs[0]) != shape_of(l.inputs[1]) || out != in)
          fail("residual scaling operands must share one shape");
        break;
    }
  }
  if (plan.layers.empty()) {
    issues.emplace_back("plan has no layers");
  } else if (plan.output_shape().height != plan.input_shape.height ||
             plan.output_shape().width != plan.input_shape.width) {
    issues.emplace_back("output spatial size differs from input");
  }
  if (plan.total_params != count_params(plan)) issues.emplace_back("total_params != sum of layers");
  if (plan.total_flops != count_flops(plan)) issues.emplace_back("total_flops != sum of layers");
  return issues;
}

std::string format_plan_report(const ArchitecturePlan& plan) {
  std::ostringstream ss;
  ss << "# genotype " << to_compact_record(plan.genotype) << "\n";
  ss << "# input " << to_string(plan.input_shape) << "; flops use 1 MAC = 2 FLOPs\n";
  ss << std::left << std::setw(4) << "#" << std::setw(24) << "name" << std::setw(19) << "kind"
     << std::setw(14) << "inputs" << std::setw(14) << "in" << std::setw(14) << "out"
     << std::right << std::setw(12) << "params" << std::setw(16) << "flops" << "  detail\n";
  for (std::size_t i = 0; i < plan.layers.size(); ++i) {
    const LayerSpec& l = plan.layers[i];
    std::string inputs;
    for (std::size_t k = 0; k < l.inputs.size(); ++k) {
      if (k) inputs += ",";
      inputs += l.inputs[k] == kNetworkInput ? "in" : std::to_string(l.inputs[k]);
    }
    std::string kind(to_string(l.kind));
    if (l.kind == LayerKind::Conv || l.kind == LayerKind::OutputConv)
      kind += " " + std::to_string(l.kernel) + "x" + std::to_string(l.kernel);
    ss << std::left << std::setw(4) << i << std::setw(24) << l.name << std::setw(19) << kind
       << std::setw(14) << inputs << std::setw(14) << to_string(l.input_shape) << std::setw(14)
       << to_string(l.output_shape) << std::right << std::setw(12) << l.param_count << std::setw(16)
       << l.flop_count << "  " << l.detail << "\n";
  }
  ss << "total_params " << plan.total_params << "\n";
  ss << "total_flops " << plan.total_flops << "\n";
  return ss.str();
}

std::string Feasibility::describe() const {
  if (feasible) return "feasible";
  std::string out = "infeasible:";
  if (params_excess) out += " params over budget by " + std::to_string(params_excess);
  if (flops_excess) out += " flops over budget by " + std::to_string(flops_excess);
  return out;
}

Feasibility check_constraints(std::uint64_t params, std::uint64_t flops, const ResourceBudget& budget) {
  Feasibility f;
  if (params > budget.max_params) f.params_excess = params - budget.max_params;
  if (flops > budget.max_flops) f.flops_excess = flops - budget.max_flops;
  f.feasible = f.params_excess == 0 && f.flops_excess == 0;
  return f;
}

Feasibility check_constraints(const ArchitecturePlan& plan, const ResourceBudget& budget) {
  return check_constraints(plan.total_params, plan.total_flops, budget);
}

}  // namespace resnas
