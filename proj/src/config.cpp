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
#include "resnas/config.hpp"

#include <functional>
#include <limits>
#include <map>
#include <set>

#include "resnas/text.hpp"

namespace resnas {

namespace {

using Setter = std::function<void(SearchConfig&, std::string_view)>;
using Getter = std::function<std::string(const SearchConfig&)>;

struct Field {
  std::string key;
  Setter set;
  Getter get;
};

int to_int(std::string_view v) {
  const std::int64_t x = parse_int(v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ParseError("integer out of range: '" + std::string(v) + "'");
  return static_cast<int>(x);
}

std::uint64_t to_limit(std::string_view v) {
  if (v == "none") return std::numeric_limits<std::uint64_t>::max();
  return parse_uint(v);
}

std::string limit_text(std::uint64_t v) {
  return v == std::numeric_limits<std::uint64_t>::max() ? "none" : std::to_string(v);
}

std::pair<std::string_view, std::string_view> split_range(std::string_view v) {
  const auto dots = v.find("..");
  if (dots == std::string_view::npos) throw ParseError("expected a range 'lo..hi', got '" + std::string(v) + "'");
  return {trim(v.substr(0, dots)), trim(v.substr(dots + 2))};
}

IntRange to_int_range(std::string_view v) {
  const auto [lo, hi] = split_range(v);
  return {to_int(lo), to_int(hi)};
}

RealRange to_real_range(std::string_view v) {
  const auto [lo, hi] = split_range(v);
  return {parse_real(lo), parse_real(hi)};
}

template <typename T, typename Parse>
std::vector<T> to_list(std::string_view v, Parse parse) {
  std::vector<T> out;
  for (const auto& item : split(v, ',')) {
    const auto t = trim(item);
    if (t.empty()) throw ParseError("empty list item");
    out.push_back(parse(t));
  }
  return out;
}

template <typename T, typename Show>
std::string list_text(const std::vector<T>& items, Show show) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += show(items[i]);
  }
  return out;
}

#define RESNAS_INT(key, member) \
  Field { key, [](SearchConfig& c, std::string_view v) { c.member = to_int(v); }, \
          [](const SearchConfig& c) { return std::to_string(c.member); } }
#define RESNAS_REAL(key, member) \
  Field { key, [](SearchConfig& c, std::string_view v) { c.member = parse_real(v); }, \
          [](const SearchConfig& c) { return format_real(c.member); } }
#define RESNAS_INT_RANGE(key, member) \
  Field { key, [](SearchConfig& c, std::string_view v) { c.member = to_int_range(v); }, \
          [](const SearchConfig& c) { return std::to_string(c.member.lo) + ".." + std::to_string(c.member.hi); } }
#define RESNAS_REAL_RANGE(key, member) \
  Field { key, [](SearchConfig& c, std::string_view v) { c.member = to_real_range(v); }, \
          [](const SearchConfig& c) { return format_real(c.member.lo) + ".." + format_real(c.member.hi); } }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      RESNAS_INT("population_size", population_size),
      RESNAS_INT("generations", generations),
      RESNAS_INT("tournament_size", tournament_size),
      Field{"seed", [](SearchConfig& c, std::string_view v) { c.seed = parse_uint(v); },
            [](const SearchConfig& c) { return std::to_string(c.seed); }},
      Field{"evaluator", [](SearchConfig& c, std::string_view v) { c.evaluator = parse_evaluator_kind(v); },
            [](const SearchConfig& c) { return std::string(to_string(c.evaluator)); }},
      Field{"worker_command", [](SearchConfig& c, std::string_view v) { c.worker_command = std::string(v); },
            [](const SearchConfig& c) { return c.worker_command; }},
      RESNAS_INT("pool_size", pool_size),
      RESNAS_REAL("handshake_timeout_seconds", handshake_timeout_seconds),
      RESNAS_REAL("crossover_rate", variation.crossover_rate),
      RESNAS_REAL("mutation_rate", variation.mutation_rate),
      RESNAS_REAL("variation.gene_swap_prob", variation.gene_swap_prob),
      RESNAS_REAL("variation.jitter_fraction", variation.jitter_fraction),
      RESNAS_INT("variation.max_mutated_genes", variation.max_mutated_genes),
      Field{"budget.max_params", [](SearchConfig& c, std::string_view v) { c.budget.max_params = to_limit(v); },
            [](const SearchConfig& c) { return limit_text(c.budget.max_params); }},
      Field{"budget.max_flops", [](SearchConfig& c, std::string_view v) { c.budget.max_flops = to_limit(v); },
            [](const SearchConfig& c) { return limit_text(c.budget.max_flops); }},
      RESNAS_INT("proxy.max_epochs", proxy.max_epochs),
      RESNAS_INT("proxy.early_stop_patience", proxy.early_stop_patience),
      RESNAS_INT("proxy.max_train_seconds", proxy.max_train_seconds),
      RESNAS_REAL("penalty.w_hd95", penalty.w_hd95),
      RESNAS_REAL("penalty.w_params", penalty.w_params),
      RESNAS_REAL("penalty.w_flops", penalty.w_flops),
      RESNAS_REAL("penalty.hd95_ref", penalty.hd95_ref),
      RESNAS_REAL("penalty.params_ref", penalty.params_ref),
      RESNAS_REAL("penalty.flops_ref", penalty.flops_ref),
      RESNAS_INT("planner.input_height", planner.input_height),
      RESNAS_INT("planner.input_width", planner.input_width),
      RESNAS_INT("planner.input_channels", planner.input_channels),
      RESNAS_INT("planner.num_classes", planner.num_classes),
      RESNAS_INT("planner.convs_per_block", planner.convs_per_block),
      Field{"planner.dilation_rates",
            [](SearchConfig& c, std::string_view v) { c.planner.dilation_rates = to_list<int>(v, to_int); },
            [](const SearchConfig& c) {
              return list_text(c.planner.dilation_rates, [](int d) { return std::to_string(d); });
            }},
      RESNAS_INT("planner.se_reduction", planner.se_reduction),
      RESNAS_INT("planner.self_attention_max_side", planner.self_attention_max_side),
      RESNAS_INT("planner.bottleneck_width_divisor", planner.bottleneck_width_divisor),
      RESNAS_INT("planner.upsample_kernel", planner.upsample_kernel),
      RESNAS_INT_RANGE("space.filter_base", space.filter_base),
      RESNAS_INT_RANGE("space.kernel_size", space.kernel_size),
      RESNAS_INT_RANGE("space.num_stages", space.num_stages),
      RESNAS_REAL_RANGE("space.dropout_rate", space.dropout_rate),
      Field{"space.attention",
            [](SearchConfig& c, std::string_view v) { c.space.attention = to_list<Attention>(v, parse_attention); },
            [](const SearchConfig& c) {
              return list_text(c.space.attention, [](Attention a) { return std::string(to_string(a)); });
            }},
      Field{"space.fusion", [](SearchConfig& c, std::string_view v) { c.space.fusion = to_list<Fusion>(v, parse_fusion); },
            [](const SearchConfig& c) {
              return list_text(c.space.fusion, [](Fusion f) { return std::string(to_string(f)); });
            }},
      Field{"space.activation",
            [](SearchConfig& c, std::string_view v) { c.space.activation = to_list<Activation>(v, parse_activation); },
            [](const SearchConfig& c) {
              return list_text(c.space.activation, [](Activation a) { return std::string(to_string(a)); });
            }},
      RESNAS_REAL_RANGE("space.residual_scale", space.residual_scale),
  };
  return table;
}

#undef RESNAS_INT
#undef RESNAS_REAL
#undef RESNAS_INT_RANGE
#undef RESNAS_REAL_RANGE

}  // namespace

SearchConfig parse_config(std::string_view text) {
  std::vector<KeyValue> items;
  try {
    items = parse_key_values(text);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  std::map<std::string_view, const Field*> by_key;
  for (const auto& f : fields()) by_key.emplace(f.key, &f);

  SearchConfig cfg;
  std::set<std::string> seen;
  for (const auto& kv : items) {
    const std::string where = "line " + std::to_string(kv.line) + ": ";
    const auto it = by_key.find(kv.key);
    if (it == by_key.end()) throw ConfigError(where + "unknown key '" + kv.key + "'");
    if (!seen.insert(kv.key).second) throw ConfigError(where + "duplicate key '" + kv.key + "'");
    try {
      it->second->set(cfg, kv.value);
    } catch (const ParseError& e) {
      throw ConfigError(where + "bad value for '" + kv.key + "': " + e.what());
    }
  }
  if (const auto problems = cfg.problems(); !problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  return cfg;
}

SearchConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text);
}

std::string format_config(const SearchConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(f.key);
  return out;
}

}  // namespace resnas
