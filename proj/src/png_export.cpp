// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/png_export.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "gaitmap/errors.hpp"

namespace gaitmap {

std::vector<std::uint8_t> to_display_rgb(const SkeletonMap& map) {
  const std::size_t plane = static_cast<std::size_t>(map.height) * map.width;
  std::vector<std::uint8_t> rgb(plane * 3, 0);
  for (int ch = 0; ch < SkeletonMap::kChannels; ++ch) {
    const auto first = map.data.begin() + static_cast<std::ptrdiff_t>(ch * plane);
    const auto [lo_it, hi_it] = std::minmax_element(first, first + static_cast<std::ptrdiff_t>(plane));
    const double lo = *lo_it;
    const double range = static_cast<double>(*hi_it) - lo;
    if (!(range > 0.0)) continue;
    for (std::size_t p = 0; p < plane; ++p) {
      const double scaled = (first[static_cast<std::ptrdiff_t>(p)] - lo) / range * 255.0;
      const auto byte = static_cast<std::uint8_t>(std::lround(std::clamp(scaled, 0.0, 255.0)));
      if (ch == 0) {
        rgb[3 * p] = byte;
      } else {
        rgb[3 * p + 1] = byte;
        rgb[3 * p + 2] = byte;
      }
    }
  }
  return rgb;
}

void export_png(const SkeletonMap& map, const std::string& path) {
  const std::vector<std::uint8_t> rgb = to_display_rgb(map);

  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw IoError("cannot create " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng error while writing " + path);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(map.width), static_cast<png_uint_32>(map.height),
               8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(map.width) * 3;
  for (int r = 0; r < map.height; ++r)
    png_write_row(png, const_cast<png_bytep>(rgb.data() + r * stride));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace gaitmap
