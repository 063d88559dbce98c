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

#include "pipfract/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

namespace pipfract {

namespace {

std::uint8_t channel(double x) {
  return static_cast<std::uint8_t>(std::round(std::clamp(x, 0.0, 1.0) * 255.0));
}

}  // namespace

Rgb colormap_sign(int v) {
  switch (v) {
    case 1: return kWhite;
    case 0: return kRed;
    case -1: return kBlack;
    default: throw std::out_of_range("colormap_sign: value " + std::to_string(v));
  }
}

Rgb colormap_jet(int level) {
  if (level < 0 || level > 255) {
    throw std::out_of_range("colormap_jet: level " + std::to_string(level));
  }
  const double t = level / 255.0;
  return {channel(1.5 - std::abs(4 * t - 3)), channel(1.5 - std::abs(4 * t - 2)),
          channel(1.5 - std::abs(4 * t - 1))};
}

bool Colormap::accepts(std::int64_t level) const {
  return kind == ColormapKind::sign3 ? (level >= -1 && level <= 1)
                                     : (level >= 0 && level <= 255);
}

Rgb Colormap::operator()(std::int64_t level) const {
  if (!accepts(level)) {
    throw std::out_of_range("level " + std::to_string(level) + " outside colormap domain");
  }
  return kind == ColormapKind::sign3 ? colormap_sign(static_cast<int>(level))
                                     : colormap_jet(static_cast<int>(level));
}

GridImage render_gridplot(std::span<const GridRow> rows, Colormap style,
                          GridGeometry geometry) {
  if (rows.empty()) throw std::invalid_argument("render_gridplot: no rows");
  if (geometry.band_width == 0 || geometry.row_height == 0) {
    throw std::invalid_argument("render_gridplot: band width and row height must be positive");
  }
  const std::size_t len = rows.front().levels.size();
  if (len == 0) throw std::invalid_argument("render_gridplot: empty row");
  for (const GridRow& r : rows) {
    if (r.levels.size() != len) throw std::invalid_argument("render_gridplot: row length mismatch");
  }

  std::vector<const GridRow*> order;
  for (const GridRow& r : rows) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const GridRow* a, const GridRow* b) { return a->k > b->k; });

  GridImage img;
  img.width = static_cast<unsigned>(len * geometry.band_width);
  const auto n = static_cast<unsigned>(rows.size());
  img.height = n * (geometry.row_height + geometry.gap) - geometry.gap;
  img.pixels.assign(std::size_t{img.width} * img.height, kWhite);

  for (unsigned r = 0; r < n; ++r) {
    const GridRow& row = *order[r];
    img.meta.push_back({row.k, row.q_first, row.q_last});
    std::vector<Rgb> line(img.width);
    for (std::size_t i = 0; i < len; ++i) {
      std::fill_n(line.begin() + static_cast<std::ptrdiff_t>(i * geometry.band_width),
                  geometry.band_width, style(row.levels[i]));
    }
    const unsigned top = r * (geometry.row_height + geometry.gap);
    for (unsigned y = 0; y < geometry.row_height; ++y) {
      std::copy(line.begin(), line.end(),
                img.pixels.begin() + static_cast<std::ptrdiff_t>(std::size_t{top + y} * img.width));
    }
  }
  return img;
}

std::vector<std::uint8_t> encode_ppm(const GridImage& image) {
  const std::string header = "P6\n" + std::to_string(image.width) + " " +
                             std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + 3 * image.pixels.size());
  for (const Rgb& p : image.pixels) {
    out.push_back(p.r);
    out.push_back(p.g);
    out.push_back(p.b);
  }
  return out;
}

void write_ppm(const GridImage& image, const std::filesystem::path& path) {
  const auto bytes = encode_ppm(image);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

GridImage read_ppm(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string magic;
  unsigned maxval = 0;
  GridImage img;
  is >> magic >> img.width >> img.height >> maxval;
  if (!is || magic != "P6" || maxval != 255) {
    throw std::runtime_error(path.string() + ": not an 8-bit P6 file");
  }
  is.get();  // single whitespace before the raster
  const std::size_t n = std::size_t{img.width} * img.height;
  std::vector<char> raw(3 * n);
  if (!is.read(raw.data(), static_cast<std::streamsize>(raw.size()))) {
    throw std::runtime_error(path.string() + ": truncated raster");
  }
  img.pixels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    img.pixels[i] = {static_cast<std::uint8_t>(raw[3 * i]),
                     static_cast<std::uint8_t>(raw[3 * i + 1]),
                     static_cast<std::uint8_t>(raw[3 * i + 2])};
  }
  return img;
}

}  // namespace pipfract
