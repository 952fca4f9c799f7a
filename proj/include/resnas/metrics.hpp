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

// Overlap and boundary metrics for 2-D multi-class label masks.
//
// HD95 definition used throughout: boundary pixels are foreground pixels with
// at least one background 4-neighbour or lying on the image border. Every
// boundary pixel of the prediction contributes its distance to the nearest
// ground-truth boundary pixel and vice versa; HD95 is the 95th percentile of
// that pooled multiset, with linear interpolation between closest ranks:
//   sorted values v[0..n-1], rank r = 0.95 * (n - 1), i = floor(r),
//   HD95 = v[i] + (r - i) * (v[i+1] - v[i])   (v[i] when i = n - 1).
// Distances are Euclidean in pixel units multiplied by the isotropic spacing.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace resnas {

class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public MetricError {
 public:
  using MetricError::MetricError;
};

class EmptyMask : public MetricError {
 public:
  enum class Side { Prediction, GroundTruth, Both };
  EmptyMask(Side side, int class_id);
  Side side() const { return side_; }

 private:
  Side side_;
};

inline constexpr int kNumClasses = 4;
inline constexpr int kClassLV = 1;
inline constexpr int kClassMYO = 2;
inline constexpr int kClassRV = 3;
std::string class_name(int class_id);

/// Row-major 8-bit label image with class ids in [0, kNumClasses).
class LabelMask {
 public:
  LabelMask(int height, int width);  // all background
  LabelMask(int height, int width, std::vector<std::uint8_t> labels);

  int height() const { return height_; }
  int width() const { return width_; }
  std::uint8_t at(int row, int col) const { return labels_[index(row, col)]; }
  void set(int row, int col, std::uint8_t label);
  std::span<const std::uint8_t> labels() const { return labels_; }

  bool operator==(const LabelMask&) const = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }
  int height_;
  int width_;
  std::vector<std::uint8_t> labels_;
};

struct Pixel {
  int row;
  int col;
  bool operator==(const Pixel&) const = default;
};

std::vector<Pixel> boundary_pixels(const LabelMask& mask, int class_id);

/// Linear-interpolation percentile (q in [0,1]) of a nonempty sample.
double percentile_linear(std::vector<double> values, double q);

double dsc(const LabelMask& pred, const LabelMask& gt, int class_id);
double hd95(const LabelMask& pred, const LabelMask& gt, int class_id, double spacing = 1.0);

struct ClassMetrics {
  int class_id = 0;
  double dsc = 0.0;
  std::optional<double> hd95;  // absent when either side has no pixels of the class
};

struct MetricReport {
  std::array<ClassMetrics, 3> classes;  // LV, MYO, RV (class ids 1..3)
  double dsc_avg = 0.0;
  std::optional<double> hd95_avg;  // mean over classes with a present HD95
  double spacing = 1.0;

  const ClassMetrics& for_class(int class_id) const { return classes.at(static_cast<std::size_t>(class_id - 1)); }
};

MetricReport report(const LabelMask& pred, const LabelMask& gt, double spacing = 1.0);

}  // namespace resnas
