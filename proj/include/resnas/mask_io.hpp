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

// Label mask file formats.
//
//   PGM: binary (P5) or ASCII (P2) graymap, maxval <= 255, pixel value = class id.
//   LMSK raw: 4-byte magic "LMSK", uint32 little-endian height, uint32
//     little-endian width, then height*width bytes in row-major order.
//
// read_mask() sniffs the magic bytes, so the extension does not matter.

#pragma once

#include <string>
#include <string_view>

#include "resnas/metrics.hpp"

namespace resnas {

class MaskFormatError : public MetricError {
 public:
  using MetricError::MetricError;
};

LabelMask decode_pgm(std::string_view bytes);
std::string encode_pgm(const LabelMask& mask);
LabelMask decode_lmsk(std::string_view bytes);
std::string encode_lmsk(const LabelMask& mask);

LabelMask read_mask(const std::string& path);
void write_pgm(const std::string& path, const LabelMask& mask);
void write_lmsk(const std::string& path, const LabelMask& mask);

}  // namespace resnas
