// Copyright 2026 The pipfract Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// @file render.hpp
/// Gridplot rasterization: one horizontal strip of colored bands per prime-index
/// order, stacked with the highest order on top, written as binary PPM.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace pipfract {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kWhite{255, 255, 255};
inline constexpr Rgb kRed{255, 0, 0};
inline constexpr Rgb kBlack{0, 0, 0};

/// sgn value -> color: +1 white, 0 red, -1 black.
Rgb colormap_sign(int v);

/// Piecewise-linear jet over t = level / 255, rounded half away from zero.
Rgb colormap_jet(int level);

enum class ColormapKind { sign3, jet256 };

struct Colormap {
  ColormapKind kind;

  /// Color of a series level; sign3 takes {-1, 0, 1}, jet256 takes 0..255.
  Rgb operator()(std::int64_t level) const;
  bool accepts(std::int64_t level) const;
};

struct GridRow {
  unsigned k = 0;
  std::vector<std::int64_t> levels;
  // q endpoints annotated above the strip.
  std::uint64_t q_first = 0;
  std::uint64_t q_last = 0;
};

struct GridGeometry {
  unsigned band_width = 1;
  unsigned row_height = 40;
  unsigned gap = 8;
};

struct RowMeta {
  unsigned k;
  std::uint64_t q_first;
  std::uint64_t q_last;
};

struct GridImage {
  unsigned width = 0;
  unsigned height = 0;
  std::vector<Rgb> pixels;  // row-major, top row first
  std::vector<RowMeta> meta;  // top to bottom

  const Rgb& at(unsigned x, unsigned y) const { return pixels[std::size_t{y} * width + x]; }
};

/// Rows are stacked highest k first. Gaps between rows are white.
GridImage render_gridplot(std::span<const GridRow> rows, Colormap style,
                          GridGeometry geometry = {});

/// Binary PPM ("P6\n<w> <h>\n255\n" + RGB triples).
void write_ppm(const GridImage& image, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_ppm(const GridImage& image);
GridImage read_ppm(const std::filesystem::path& path);

}  // namespace pipfract
