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

#include "resnas/mask_io.hpp"

#include <cctype>
#include <cstdint>
#include <vector>

#include "resnas/text.hpp"

namespace resnas {

namespace {

constexpr std::string_view kLmskMagic = "LMSK";
constexpr std::uint32_t kMaxSide = 1u << 15;

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

  // Next whitespace-delimited header token, skipping '#' comments.
  std::string_view token() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) throw MaskFormatError("PGM: truncated header");
    return bytes_.substr(start, pos_ - start);
  }

  std::uint64_t number() {
    try {
      return parse_uint(token());
    } catch (const ParseError& e) {
      throw MaskFormatError(std::string("PGM: ") + e.what());
    }
  }

  // Binary payload starts after exactly one whitespace byte.
  std::string_view payload() {
    if (pos_ >= bytes_.size()) throw MaskFormatError("PGM: missing payload");
    return bytes_.substr(pos_ + 1);
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t read_u32le(std::string_view bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<std::uint8_t>(bytes[at + static_cast<std::size_t>(i)]);
  }
  return v;
}

void append_u32le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

LabelMask make_mask(std::uint64_t height, std::uint64_t width, std::vector<std::uint8_t> labels) {
  if (height < 1 || width < 1 || height > kMaxSide || width > kMaxSide) {
    throw MaskFormatError("mask dimensions out of range");
  }
  try {
    return LabelMask(static_cast<int>(height), static_cast<int>(width), std::move(labels));
  } catch (const MaskFormatError&) {
    throw;
  } catch (const MetricError& e) {
    throw MaskFormatError(e.what());
  }
}

}  // namespace

LabelMask decode_pgm(std::string_view bytes) {
  PgmReader reader(bytes);
  const auto magic = reader.token();
  if (magic != "P5" && magic != "P2") throw MaskFormatError("not a PGM file");
  const auto width = reader.number();
  const auto height = reader.number();
  const auto maxval = reader.number();
  if (maxval < 1 || maxval > 255) throw MaskFormatError("PGM: only 8-bit graymaps are supported");
  if (width < 1 || height < 1 || width > kMaxSide || height > kMaxSide)
    throw MaskFormatError("PGM: dimensions out of range");
  const std::size_t n = static_cast<std::size_t>(width * height);
  std::vector<std::uint8_t> labels(n);
  if (magic == "P5") {
    const auto data = reader.payload();
    if (data.size() < n) throw MaskFormatError("PGM: payload shorter than width*height");
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::uint8_t>(data[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = reader.number();
      if (v > maxval) throw MaskFormatError("PGM: sample exceeds maxval");
      labels[i] = static_cast<std::uint8_t>(v);
    }
  }
  return make_mask(height, width, std::move(labels));
}

std::string encode_pgm(const LabelMask& mask) {
  std::string out = "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n255\n";
  for (std::uint8_t v : mask.labels()) out.push_back(static_cast<char>(v));
  return out;
}

LabelMask decode_lmsk(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != kLmskMagic) throw MaskFormatError("not an LMSK file");
  const std::uint32_t height = read_u32le(bytes, 4);
  const std::uint32_t width = read_u32le(bytes, 8);
  if (height < 1 || width < 1 || height > kMaxSide || width > kMaxSide)
    throw MaskFormatError("LMSK: dimensions out of range");
  const std::size_t n = static_cast<std::size_t>(height) * width;
  if (bytes.size() - 12 != n) throw MaskFormatError("LMSK: payload size does not match header");
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::uint8_t>(bytes[12 + i]);
  return make_mask(height, width, std::move(labels));
}

std::string encode_lmsk(const LabelMask& mask) {
  std::string out(kLmskMagic);
  append_u32le(out, static_cast<std::uint32_t>(mask.height()));
  append_u32le(out, static_cast<std::uint32_t>(mask.width()));
  for (std::uint8_t v : mask.labels()) out.push_back(static_cast<char>(v));
  return out;
}

LabelMask read_mask(const std::string& path) {
  std::string bytes;
  try {
    bytes = read_text_file(path);
  } catch (const std::runtime_error& e) {
    throw MaskFormatError(e.what());
  }
  try {
    if (bytes.size() >= 4 && std::string_view(bytes).substr(0, 4) == kLmskMagic) return decode_lmsk(bytes);
    return decode_pgm(bytes);
  } catch (const MaskFormatError& e) {
    throw MaskFormatError(path + ": " + e.what());
  }
}

void write_pgm(const std::string& path, const LabelMask& mask) { write_text_file(path, encode_pgm(mask)); }

void write_lmsk(const std::string& path, const LabelMask& mask) { write_text_file(path, encode_lmsk(mask)); }

}  // namespace resnas
