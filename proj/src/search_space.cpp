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

#include "resnas/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "resnas/text.hpp"

namespace resnas {

namespace {

constexpr std::array<std::string_view, 2> kAttentionNames{"squeeze_excitation", "self_attention"};
constexpr std::array<std::string_view, 3> kFusionNames{"add", "concat", "weighted_sum"};
constexpr std::array<std::string_view, 4> kActivationNames{"relu", "elu", "tanh", "sigmoid"};
constexpr std::array<std::string_view, kGeneCount> kGeneNames{
    "filter_base", "kernel_size", "num_stages", "dropout_rate",
    "attention",   "fusion",      "activation", "residual_scale"};

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view text, const std::array<std::string_view, N>& names,
                std::string_view what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == text) return static_cast<Enum>(i);
  }
  throw ParseError("unknown " + std::string(what) + " '" + std::string(text) + "'");
}

template <typename Enum>
bool contains(const std::vector<Enum>& choices, Enum v) {
  return std::find(choices.begin(), choices.end(), v) != choices.end();
}

std::string range_text(const IntRange& r) {
  return "[" + std::to_string(r.lo) + "," + std::to_string(r.hi) + "]";
}

std::string range_text(const RealRange& r) {
  return "[" + format_real(r.lo) + "," + format_real(r.hi) + "]";
}

template <typename Enum>
std::string choices_text(const std::vector<Enum>& choices) {
  std::string out = "{";
  for (std::size_t i = 0; i < choices.size(); ++i) {
    if (i) out += ",";
    out += to_string(choices[i]);
  }
  return out + "}";
}

double sample_real(const RealRange& r, RandomSource& rng) {
  if (r.lo == r.hi) return r.lo;
  return std::clamp(r.lo + rng.uniform01() * r.width(), r.lo, r.hi);
}

template <typename Enum>
Enum sample_choice(const std::vector<Enum>& choices, RandomSource& rng) {
  const auto i = rng.uniform_int(0, static_cast<std::int64_t>(choices.size()) - 1);
  return choices[static_cast<std::size_t>(i)];
}

int integral_coordinate(double v, double lo, double hi, Gene gene) {
  if (!(v >= lo && v <= hi) || std::floor(v) != v) {
    throw ParseError("coordinate for " + std::string(gene_name(gene)) + " out of domain: " +
                     format_real(v));
  }
  return static_cast<int>(v);
}

}  // namespace

std::string_view to_string(Attention value) { return kAttentionNames.at(static_cast<std::size_t>(value)); }
std::string_view to_string(Fusion value) { return kFusionNames.at(static_cast<std::size_t>(value)); }
std::string_view to_string(Activation value) { return kActivationNames.at(static_cast<std::size_t>(value)); }

Attention parse_attention(std::string_view text) {
  return parse_enum<Attention>(text, kAttentionNames, "attention");
}
Fusion parse_fusion(std::string_view text) { return parse_enum<Fusion>(text, kFusionNames, "fusion"); }
Activation parse_activation(std::string_view text) {
  return parse_enum<Activation>(text, kActivationNames, "activation");
}

std::string_view gene_name(Gene gene) { return kGeneNames.at(static_cast<std::size_t>(gene)); }

Genotype reference_genotype() {
  return Genotype{96, 3, 3, 0.3, Attention::SelfAttention, Fusion::WeightedSum,
                  Activation::Sigmoid, 0.4};
}

SearchSpace SearchSpace::single_point(const Genotype& g) {
  SearchSpace s;
  s.filter_base = {g.filter_base, g.filter_base};
  s.kernel_size = {g.kernel_size, g.kernel_size};
  s.num_stages = {g.num_stages, g.num_stages};
  s.dropout_rate = {g.dropout_rate, g.dropout_rate};
  s.attention = {g.attention};
  s.fusion = {g.fusion};
  s.activation = {g.activation};
  s.residual_scale = {g.residual_scale, g.residual_scale};
  return s;
}

std::vector<std::string> SearchSpace::problems() const {
  const SearchSpace full;
  std::vector<std::string> out;
  auto check_int = [&](Gene gene, const IntRange& r, const IntRange& outer) {
    if (r.lo > r.hi) out.push_back(std::string(gene_name(gene)) + ": empty range " + range_text(r));
    else if (!outer.contains(r.lo) || !outer.contains(r.hi))
      out.push_back(std::string(gene_name(gene)) + ": range " + range_text(r) + " exceeds " +
                    range_text(outer));
  };
  auto check_real = [&](Gene gene, const RealRange& r, const RealRange& outer) {
    if (!(r.lo <= r.hi))
      out.push_back(std::string(gene_name(gene)) + ": empty interval " + range_text(r));
    else if (!outer.contains(r.lo) || !outer.contains(r.hi))
      out.push_back(std::string(gene_name(gene)) + ": interval " + range_text(r) + " exceeds " +
                    range_text(outer));
  };
  auto check_choices = [&](Gene gene, std::size_t n) {
    if (n == 0) out.push_back(std::string(gene_name(gene)) + ": no choices");
  };
  check_int(Gene::FilterBase, filter_base, full.filter_base);
  check_int(Gene::KernelSize, kernel_size, full.kernel_size);
  check_int(Gene::NumStages, num_stages, full.num_stages);
  check_real(Gene::DropoutRate, dropout_rate, full.dropout_rate);
  check_choices(Gene::Attention, attention.size());
  check_choices(Gene::Fusion, fusion.size());
  check_choices(Gene::Activation, activation.size());
  check_real(Gene::ResidualScale, residual_scale, full.residual_scale);
  return out;
}

std::string ValidationResult::message() const {
  if (ok()) return "ok";
  std::ostringstream ss;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto& v = violations[i];
    if (i) ss << "; ";
    ss << gene_name(v.gene) << "=" << v.value << " outside " << v.bound;
  }
  return ss.str();
}

Genotype sample_genotype(const SearchSpace& space, RandomSource& rng) {
  Genotype g;
  g.filter_base = static_cast<int>(rng.uniform_int(space.filter_base.lo, space.filter_base.hi));
  g.kernel_size = static_cast<int>(rng.uniform_int(space.kernel_size.lo, space.kernel_size.hi));
  g.num_stages = static_cast<int>(rng.uniform_int(space.num_stages.lo, space.num_stages.hi));
  g.dropout_rate = sample_real(space.dropout_rate, rng);
  g.attention = sample_choice(space.attention, rng);
  g.fusion = sample_choice(space.fusion, rng);
  g.activation = sample_choice(space.activation, rng);
  g.residual_scale = sample_real(space.residual_scale, rng);
  return g;
}

ValidationResult validate(const SearchSpace& space, const Genotype& g) {
  ValidationResult result;
  auto add = [&](Gene gene, std::string value, std::string bound) {
    result.violations.push_back({gene, std::move(value), std::move(bound)});
  };
  if (!space.filter_base.contains(g.filter_base))
    add(Gene::FilterBase, std::to_string(g.filter_base), range_text(space.filter_base));
  if (!space.kernel_size.contains(g.kernel_size))
    add(Gene::KernelSize, std::to_string(g.kernel_size), range_text(space.kernel_size));
  if (!space.num_stages.contains(g.num_stages))
    add(Gene::NumStages, std::to_string(g.num_stages), range_text(space.num_stages));
  if (!space.dropout_rate.contains(g.dropout_rate))
    add(Gene::DropoutRate, format_real(g.dropout_rate), range_text(space.dropout_rate));
  if (!contains(space.attention, g.attention))
    add(Gene::Attention, std::string(to_string(g.attention)), choices_text(space.attention));
  if (!contains(space.fusion, g.fusion))
    add(Gene::Fusion, std::string(to_string(g.fusion)), choices_text(space.fusion));
  if (!contains(space.activation, g.activation))
    add(Gene::Activation, std::string(to_string(g.activation)), choices_text(space.activation));
  if (!space.residual_scale.contains(g.residual_scale))
    add(Gene::ResidualScale, format_real(g.residual_scale), range_text(space.residual_scale));
  return result;
}

NumericVector encode_numeric(const Genotype& g) {
  return {static_cast<double>(g.filter_base),
          static_cast<double>(g.kernel_size),
          static_cast<double>(g.num_stages),
          g.dropout_rate,
          static_cast<double>(g.attention),
          static_cast<double>(g.fusion),
          static_cast<double>(g.activation),
          g.residual_scale};
}

Genotype decode_numeric(const NumericVector& v) {
  Genotype g;
  g.filter_base = integral_coordinate(v[0], -1e9, 1e9, Gene::FilterBase);
  g.kernel_size = integral_coordinate(v[1], -1e9, 1e9, Gene::KernelSize);
  g.num_stages = integral_coordinate(v[2], -1e9, 1e9, Gene::NumStages);
  g.dropout_rate = v[3];
  g.attention = static_cast<Attention>(
      integral_coordinate(v[4], 0, kAttentionNames.size() - 1, Gene::Attention));
  g.fusion = static_cast<Fusion>(integral_coordinate(v[5], 0, kFusionNames.size() - 1, Gene::Fusion));
  g.activation = static_cast<Activation>(
      integral_coordinate(v[6], 0, kActivationNames.size() - 1, Gene::Activation));
  g.residual_scale = v[7];
  return g;
}

std::string to_record(const Genotype& g) {
  std::string out;
  out += "filter_base=" + std::to_string(g.filter_base) + "\n";
  out += "kernel_size=" + std::to_string(g.kernel_size) + "\n";
  out += "num_stages=" + std::to_string(g.num_stages) + "\n";
  out += "dropout_rate=" + format_real(g.dropout_rate) + "\n";
  out += "attention=" + std::string(to_string(g.attention)) + "\n";
  out += "fusion=" + std::string(to_string(g.fusion)) + "\n";
  out += "activation=" + std::string(to_string(g.activation)) + "\n";
  out += "residual_scale=" + format_real(g.residual_scale) + "\n";
  return out;
}

std::string to_compact_record(const Genotype& g) {
  std::string out = to_record(g);
  out.pop_back();
  std::replace(out.begin(), out.end(), '\n', ',');
  return out;
}

Genotype parse_genotype_record(std::string_view text) {
  std::map<std::string, std::string> values;
  for (auto& item : parse_record_items(text)) {
    if (std::find(kGeneNames.begin(), kGeneNames.end(), item.key) == kGeneNames.end()) {
      throw ParseError("unknown genotype key '" + item.key + "'");
    }
    if (!values.emplace(item.key, item.value).second) {
      throw ParseError("duplicate genotype key '" + item.key + "'");
    }
  }
  auto take = [&](Gene gene) -> const std::string& {
    const auto it = values.find(std::string(gene_name(gene)));
    if (it == values.end()) throw ParseError("missing genotype key '" + std::string(gene_name(gene)) + "'");
    return it->second;
  };
  auto field = [&](Gene gene, auto&& parse) {
    const std::string& raw = take(gene);
    try {
      return parse(raw);
    } catch (const ParseError& e) {
      throw ParseError("bad value for '" + std::string(gene_name(gene)) + "': " + e.what());
    }
  };
  auto as_int = [](const std::string& s) {
    const auto v = parse_int(s);
    if (v < -1'000'000'000 || v > 1'000'000'000) throw ParseError("integer out of range");
    return static_cast<int>(v);
  };
  auto as_real = [](const std::string& s) {
    const double v = parse_real(s);
    if (!std::isfinite(v)) throw ParseError("value must be finite");
    return v;
  };
  Genotype g;
  g.filter_base = field(Gene::FilterBase, as_int);
  g.kernel_size = field(Gene::KernelSize, as_int);
  g.num_stages = field(Gene::NumStages, as_int);
  g.dropout_rate = field(Gene::DropoutRate, as_real);
  g.attention = field(Gene::Attention, [](const std::string& s) { return parse_attention(s); });
  g.fusion = field(Gene::Fusion, [](const std::string& s) { return parse_fusion(s); });
  g.activation = field(Gene::Activation, [](const std::string& s) { return parse_activation(s); });
  g.residual_scale = field(Gene::ResidualScale, as_real);
  return g;
}

bool serialized_less(const Genotype& a, const Genotype& b) { return to_record(a) < to_record(b); }

}  // namespace resnas
