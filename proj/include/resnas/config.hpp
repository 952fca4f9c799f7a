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
// Run configuration file: one `key = value` per line, `#` comments.
// Missing keys keep their defaults; unknown or repeated keys are errors.
//
//   population_size, generations, tournament_size, seed, evaluator
//   (surrogate | external), worker_command, pool_size,
//   handshake_timeout_seconds, crossover_rate, mutation_rate
//   variation.{gene_swap_prob, jitter_fraction, max_mutated_genes}
//   budget.{max_params, max_flops}            integer or "none"
//   proxy.{max_epochs, early_stop_patience, max_train_seconds}
//   penalty.{w_hd95, w_params, w_flops, hd95_ref, params_ref, flops_ref}
//   planner.{input_height, input_width, input_channels, num_classes,
//            convs_per_block, dilation_rates, se_reduction,
//            self_attention_max_side, bottleneck_width_divisor, upsample_kernel}
//   space.{filter_base, kernel_size, num_stages, dropout_rate,
//          residual_scale}                    ranges written "lo..hi"
//   space.{attention, fusion, activation}     comma-separated choices

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "resnas/evolution.hpp"

namespace resnas {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies the file's keys over the defaults and validates the result.
/// Throws ConfigError naming the key and line, or listing every problem.
SearchConfig parse_config(std::string_view text);
SearchConfig load_config(const std::string& path);

/// Every key with its resolved value, in the order documented above.
std::string format_config(const SearchConfig& cfg);

/// Every accepted key.
std::vector<std::string> config_keys();

}  // namespace resnas
