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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "resnas/random.hpp"

namespace resnas {

enum class Attention : std::uint8_t { SqueezeExcitation, SelfAttention };
enum class Fusion : std::uint8_t { Add, Concat, WeightedSum };
enum class Activation : std::uint8_t { ReLU, ELU, Tanh, Sigmoid };

std::string_view to_string(Attention value);
std::string_view to_string(Fusion value);
std::string_view to_string(Activation value);

// Lowercase wire names (squeeze_excitation, weighted_sum, ...). Throw ParseError.
Attention parse_attention(std::string_view text);
Fusion parse_fusion(std::string_view text);
Activation parse_activation(std::string_view text);

/// The eight searched genes. Declaration order is the canonical order used by
/// serialization, numeric encoding, crossover and mutation.
enum class Gene : std::uint8_t {
  FilterBase,
  KernelSize,
  NumStages,
  DropoutRate,
  Attention,
  Fusion,
  Activation,
  ResidualScale,
};
inline constexpr std::size_t kGeneCount = 8;
std::string_view gene_name(Gene gene);

/// One candidate architecture.
struct Genotype {
  int filter_base = 32;       // channels of stage 1; stage i uses filter_base * 2^(i-1)
  int kernel_size = 3;        // pixels
  int num_stages = 2;         // encoder (and decoder) stages
  double dropout_rate = 0.1;  // probability
  Attention attention = Attention::SqueezeExcitation;
  Fusion fusion = Fusion::Add;
  Activation activation = Activation::ReLU;
  double residual_scale = 1.0;  // alpha in the decoder's convex skip blend

  bool operator==(const Genotype&) const = default;
};

/// The reference architecture used for complexity checks.
Genotype reference_genotype();

struct IntRange {
  int lo;
  int hi;
  bool contains(int v) const { return lo <= v && v <= hi; }
  bool operator==(const IntRange&) const = default;
};

struct RealRange {
  double lo;
  double hi;
  bool contains(double v) const { return lo <= v && v <= hi; }
  double width() const { return hi - lo; }
  bool operator==(const RealRange&) const = default;
};

/// Per-gene bounds and choice lists. Default construction is the full
/// search space.
struct SearchSpace {
  IntRange filter_base{32, 127};
  IntRange kernel_size{1, 7};
  IntRange num_stages{2, 4};
  RealRange dropout_rate{0.1, 0.5};
  std::vector<Attention> attention{Attention::SqueezeExcitation, Attention::SelfAttention};
  std::vector<Fusion> fusion{Fusion::Add, Fusion::Concat, Fusion::WeightedSum};
  std::vector<Activation> activation{Activation::ReLU, Activation::ELU, Activation::Tanh,
                                     Activation::Sigmoid};
  RealRange residual_scale{0.1, 1.0};

  /// Space containing exactly one genotype.
  static SearchSpace single_point(const Genotype& g);

  /// Structural problems (empty ranges, empty choice lists, bounds outside the
  /// default space). Empty means usable.
  std::vector<std::string> problems() const;

  bool operator==(const SearchSpace&) const = default;
};

struct GeneViolation {
  Gene gene;
  std::string value;
  std::string bound;
};

struct ValidationResult {
  std::vector<GeneViolation> violations;

  bool ok() const { return violations.empty(); }
  std::string message() const;
};

Genotype sample_genotype(const SearchSpace& space, RandomSource& rng);
ValidationResult validate(const SearchSpace& space, const Genotype& g);

/// Fixed-length numeric encoding in canonical gene order. Enum genes map to
/// their ordinal in declaration order (SqueezeExcitation=0, SelfAttention=1;
/// Add=0, Concat=1, WeightedSum=2; ReLU=0, ELU=1, Tanh=2, Sigmoid=3).
using NumericVector = std::array<double, kGeneCount>;
NumericVector encode_numeric(const Genotype& g);
/// Inverse of encode_numeric. Throws ParseError on non-integral or out-of-range
/// integer/ordinal coordinates.
Genotype decode_numeric(const NumericVector& v);

/// Flat key-value record, one `key=value` per line in canonical gene order.
std::string to_record(const Genotype& g);
/// Same items joined by commas on one line.
std::string to_compact_record(const Genotype& g);
/// Accepts `key=value` items separated by newlines, commas or whitespace.
/// Every key must appear exactly once. Throws ParseError naming the key.
Genotype parse_genotype_record(std::string_view text);

/// Total order on genotypes by their serialized record.
bool serialized_less(const Genotype& a, const Genotype& b);

}  // namespace resnas
