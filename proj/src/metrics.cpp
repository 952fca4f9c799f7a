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

#include "resnas/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace resnas {

namespace {

constexpr double kFar = 1e20;

void require_same_size(const LabelMask& a, const LabelMask& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw DimensionMismatch("mask dimensions differ: " + std::to_string(a.height()) + "x" +
                            std::to_string(a.width()) + " vs " + std::to_string(b.height()) + "x" +
                            std::to_string(b.width()));
  }
}

std::size_t count_class(const LabelMask& m, int class_id) {
  return static_cast<std::size_t>(std::count(m.labels().begin(), m.labels().end(),
                                             static_cast<std::uint8_t>(class_id)));
}

// Felzenszwalb-Huttenlocher lower envelope of parabolas, in place over `f`
// (stride `stride`, `n` samples). Exact for integer inputs.
void squared_distance_1d(std::vector<double>& f, std::size_t offset, std::size_t stride, int n,
                         std::vector<double>& scratch_f, std::vector<int>& v, std::vector<double>& z) {
  for (int q = 0; q < n; ++q) scratch_f[static_cast<std::size_t>(q)] = f[offset + stride * static_cast<std::size_t>(q)];
  auto fv = [&](int q) { return scratch_f[static_cast<std::size_t>(q)]; };
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  auto intersect = [&](int q, int p) {
    return ((fv(q) + double(q) * q) - (fv(p) + double(p) * p)) / (2.0 * q - 2.0 * p);
  };
  for (int q = 1; q < n; ++q) {
    // z[0] is -inf, so the scan always stops at k = 0 at the latest.
    double s = intersect(q, v[static_cast<std::size_t>(k)]);
    while (s <= z[static_cast<std::size_t>(k)]) {
      --k;
      s = intersect(q, v[static_cast<std::size_t>(k)]);
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
    const int p = v[static_cast<std::size_t>(k)];
    f[offset + stride * static_cast<std::size_t>(q)] = double(q - p) * (q - p) + fv(p);
  }
}

// Squared Euclidean distance from every pixel to the nearest feature pixel.
std::vector<double> squared_distance_transform(int height, int width, const std::vector<Pixel>& features) {
  std::vector<double> grid(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), kFar);
  for (const Pixel& p : features) {
    grid[static_cast<std::size_t>(p.row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(p.col)] = 0.0;
  }
  const int longest = std::max(height, width);
  std::vector<double> scratch(static_cast<std::size_t>(longest));
  std::vector<int> v(static_cast<std::size_t>(longest));
  std::vector<double> z(static_cast<std::size_t>(longest) + 1);
  for (int c = 0; c < width; ++c) {
    squared_distance_1d(grid, static_cast<std::size_t>(c), static_cast<std::size_t>(width), height, scratch, v, z);
  }
  for (int r = 0; r < height; ++r) {
    squared_distance_1d(grid, static_cast<std::size_t>(r) * static_cast<std::size_t>(width), 1, width, scratch, v, z);
  }
  return grid;
}

}  // namespace

EmptyMask::EmptyMask(Side side, int class_id)
    : MetricError(std::string(side == Side::Prediction    ? "prediction"
                              : side == Side::GroundTruth ? "ground truth"
                                                          : "prediction and ground truth") +
                  " mask empty for class " + std::to_string(class_id)),
      side_(side) {}

std::string class_name(int class_id) {
  switch (class_id) {
    case 0: return "background";
    case kClassLV: return "lv";
    case kClassMYO: return "myo";
    case kClassRV: return "rv";
    default: return "class" + std::to_string(class_id);
  }
}

LabelMask::LabelMask(int height, int width)
    : LabelMask(height, width,
                std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(height, 0)) *
                                          static_cast<std::size_t>(std::max(width, 0)))) {}

LabelMask::LabelMask(int height, int width, std::vector<std::uint8_t> labels)
    : height_(height), width_(width), labels_(std::move(labels)) {
  if (height < 1 || width < 1) throw MetricError("mask dimensions must be >= 1");
  if (labels_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
    throw MetricError("mask payload size does not match dimensions");
  }
  for (std::uint8_t v : labels_) {
    if (v >= kNumClasses) throw MetricError("mask label " + std::to_string(v) + " outside [0,3]");
  }
}

void LabelMask::set(int row, int col, std::uint8_t label) {
  if (label >= kNumClasses) throw MetricError("mask label outside [0,3]");
  labels_.at(index(row, col)) = label;
}

std::vector<Pixel> boundary_pixels(const LabelMask& mask, int class_id) {
  std::vector<Pixel> out;
  const int h = mask.height();
  const int w = mask.width();
  const auto cls = static_cast<std::uint8_t>(class_id);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (mask.at(r, c) != cls) continue;
      const bool edge = r == 0 || c == 0 || r == h - 1 || c == w - 1 || mask.at(r - 1, c) != cls ||
                        mask.at(r + 1, c) != cls || mask.at(r, c - 1) != cls || mask.at(r, c + 1) != cls;
      if (edge) out.push_back({r, c});
    }
  }
  return out;
}

double percentile_linear(std::vector<double> values, double q) {
  if (values.empty()) throw MetricError("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double rank = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double dsc(const LabelMask& pred, const LabelMask& gt, int class_id) {
  require_same_size(pred, gt);
  const auto cls = static_cast<std::uint8_t>(class_id);
  std::size_t in_pred = 0, in_gt = 0, both = 0;
  const auto p = pred.labels();
  const auto g = gt.labels();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool a = p[i] == cls;
    const bool b = g[i] == cls;
    in_pred += a;
    in_gt += b;
    both += a && b;
  }
  if (in_pred + in_gt == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(in_pred + in_gt);
}

double hd95(const LabelMask& pred, const LabelMask& gt, int class_id, double spacing) {
  require_same_size(pred, gt);
  const bool pred_empty = count_class(pred, class_id) == 0;
  const bool gt_empty = count_class(gt, class_id) == 0;
  if (pred_empty && gt_empty) throw EmptyMask(EmptyMask::Side::Both, class_id);
  if (pred_empty) throw EmptyMask(EmptyMask::Side::Prediction, class_id);
  if (gt_empty) throw EmptyMask(EmptyMask::Side::GroundTruth, class_id);

  const auto p_edge = boundary_pixels(pred, class_id);
  const auto g_edge = boundary_pixels(gt, class_id);
  const auto to_g = squared_distance_transform(gt.height(), gt.width(), g_edge);
  const auto to_p = squared_distance_transform(pred.height(), pred.width(), p_edge);

  const auto w = static_cast<std::size_t>(pred.width());
  std::vector<double> pooled;
  pooled.reserve(p_edge.size() + g_edge.size());
  for (const Pixel& p : p_edge) {
    pooled.push_back(std::sqrt(to_g[static_cast<std::size_t>(p.row) * w + static_cast<std::size_t>(p.col)]) * spacing);
  }
  for (const Pixel& g : g_edge) {
    pooled.push_back(std::sqrt(to_p[static_cast<std::size_t>(g.row) * w + static_cast<std::size_t>(g.col)]) * spacing);
  }
  return percentile_linear(std::move(pooled), 0.95);
}

MetricReport report(const LabelMask& pred, const LabelMask& gt, double spacing) {
  require_same_size(pred, gt);
  MetricReport r;
  r.spacing = spacing;
  double dsc_sum = 0.0;
  double hd_sum = 0.0;
  int hd_count = 0;
  for (int cls = 1; cls < kNumClasses; ++cls) {
    ClassMetrics& m = r.classes[static_cast<std::size_t>(cls - 1)];
    m.class_id = cls;
    m.dsc = dsc(pred, gt, cls);
    dsc_sum += m.dsc;
    if (count_class(pred, cls) > 0 && count_class(gt, cls) > 0) {
      m.hd95 = hd95(pred, gt, cls, spacing);
      hd_sum += *m.hd95;
      ++hd_count;
    }
  }
  r.dsc_avg = dsc_sum / 3.0;
  if (hd_count > 0) r.hd95_avg = hd_sum / hd_count;
  return r;
}

}  // namespace resnas
