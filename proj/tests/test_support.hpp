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
// Shared helpers for tests: scripted random sources, brute-force metric
// oracles and scratch directories.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "resnas/metrics.hpp"
#include "resnas/random.hpp"

namespace resnas::testing {

/// Replays a fixed sequence of draws. Each uniform01() must meet a double and
/// each uniform_int() an integer (checked against its range).
class ScriptedRandom final : public RandomSource {
 public:
  using Draw = std::variant<double, std::int64_t>;
  explicit ScriptedRandom(std::vector<Draw> draws) : draws_(draws.begin(), draws.end()) {}

  double uniform01() override {
    const Draw d = next();
    if (!std::holds_alternative<double>(d)) throw std::logic_error("script expected uniform_int, got uniform01");
    return std::get<double>(d);
  }
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) override {
    const Draw d = next();
    if (!std::holds_alternative<std::int64_t>(d)) throw std::logic_error("script expected uniform01, got uniform_int");
    const auto v = std::get<std::int64_t>(d);
    if (v < lo || v > hi) throw std::logic_error("scripted integer outside the requested range");
    return v;
  }
  std::size_t remaining() const { return draws_.size(); }

 private:
  Draw next() {
    if (draws_.empty()) throw std::logic_error("script exhausted");
    Draw d = draws_.front();
    draws_.pop_front();
    return d;
  }
  std::deque<Draw> draws_;
};

inline ScriptedRandom::Draw I(std::int64_t v) { return v; }
inline ScriptedRandom::Draw R(double v) { return v; }

// Oracles --------------------------------------------------------------------

inline double dsc_oracle(const LabelMask& a, const LabelMask& b, int cls) {
  long na = 0, nb = 0, both = 0;
  for (int r = 0; r < a.height(); ++r)
    for (int c = 0; c < a.width(); ++c) {
      const bool x = a.at(r, c) == cls;
      const bool y = b.at(r, c) == cls;
      na += x;
      nb += y;
      both += x && y;
    }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

// Boundary: class pixels with a 4-neighbour that is outside the image or of
// another label. Computed over a padded copy.
inline std::vector<std::pair<int, int>> boundary_oracle(const LabelMask& m, int cls) {
  const int h = m.height() + 2;
  const int w = m.width() + 2;
  std::vector<int> padded(static_cast<std::size_t>(h * w), -1);
  for (int r = 0; r < m.height(); ++r)
    for (int c = 0; c < m.width(); ++c) padded[static_cast<std::size_t>((r + 1) * w + c + 1)] = m.at(r, c);
  std::vector<std::pair<int, int>> out;
  const int dr[4] = {-1, 1, 0, 0};
  const int dc[4] = {0, 0, -1, 1};
  for (int r = 1; r < h - 1; ++r)
    for (int c = 1; c < w - 1; ++c) {
      if (padded[static_cast<std::size_t>(r * w + c)] != cls) continue;
      bool edge = false;
      for (int k = 0; k < 4; ++k) edge = edge || padded[static_cast<std::size_t>((r + dr[k]) * w + c + dc[k])] != cls;
      if (edge) out.emplace_back(r - 1, c - 1);
    }
  return out;
}

/// Brute-force pooled HD95: every boundary pixel's nearest distance to the
/// other boundary, both directions, 95th percentile at rank 0.95*(n-1).
inline double hd95_oracle(const LabelMask& a, const LabelMask& b, int cls, double spacing = 1.0) {
  const auto ea = boundary_oracle(a, cls);
  const auto eb = boundary_oracle(b, cls);
  if (ea.empty() || eb.empty()) throw std::logic_error("oracle needs both classes present");
  std::vector<double> d;
  auto directed = [&](const auto& from, const auto& to) {
    for (const auto& [r, c] : from) {
      long best = -1;
      for (const auto& [r2, c2] : to) {
        const long dd = static_cast<long>(r - r2) * (r - r2) + static_cast<long>(c - c2) * (c - c2);
        if (best < 0 || dd < best) best = dd;
      }
      d.push_back(std::sqrt(static_cast<double>(best)) * spacing);
    }
  };
  directed(ea, eb);
  directed(eb, ea);
  std::sort(d.begin(), d.end());
  const double pos = 0.95 * static_cast<double>(d.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= d.size()) return d.back();
  return d[i] + (pos - static_cast<double>(i)) * (d[i + 1] - d[i]);
}

/// Random mask with blob-like classes so boundaries are nontrivial.
inline LabelMask random_mask(RandomSource& rng, int h, int w) {
  LabelMask m(h, w);
  const int blobs = static_cast<int>(rng.uniform_int(0, 6));
  for (int b = 0; b < blobs; ++b) {
    const auto cls = static_cast<std::uint8_t>(rng.uniform_int(1, 3));
    const int r0 = static_cast<int>(rng.uniform_int(0, h - 1));
    const int c0 = static_cast<int>(rng.uniform_int(0, w - 1));
    const int rh = static_cast<int>(rng.uniform_int(0, std::max(1, h / 3)));
    const int rw = static_cast<int>(rng.uniform_int(0, std::max(1, w / 3)));
    for (int r = std::max(0, r0 - rh); r <= std::min(h - 1, r0 + rh); ++r)
      for (int c = std::max(0, c0 - rw); c <= std::min(w - 1, c0 + rw); ++c)
        if ((r - r0) * (r - r0) * (rw + 1) * (rw + 1) + (c - c0) * (c - c0) * (rh + 1) * (rh + 1) <=
            (rh + 1) * (rh + 1) * (rw + 1) * (rw + 1))
          m.set(r, c, cls);
  }
  // Salt noise.
  const int specks = static_cast<int>(rng.uniform_int(0, 8));
  for (int s = 0; s < specks; ++s)
    m.set(static_cast<int>(rng.uniform_int(0, h - 1)), static_cast<int>(rng.uniform_int(0, w - 1)),
          static_cast<std::uint8_t>(rng.uniform_int(0, 3)));
  return m;
}

inline bool has_class(const LabelMask& m, int cls) {
  for (auto v : m.labels())
    if (v == cls) return true;
  return false;
}

/// Fresh empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::path(RESNAS_TEST_TMP) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string stub_worker_command(const std::string& extra_args = "") {
  std::string cmd = std::string("'") + RESNAS_STUB_WORKER + "'";
  if (!extra_args.empty()) cmd += " " + extra_args;
  return cmd;
}

}  // namespace resnas::testing
