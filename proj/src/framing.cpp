// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/framing.hpp"

#include <algorithm>
#include <cmath>

#include "gaitmap/errors.hpp"

namespace gaitmap {

namespace {

SkeletonMap extract(const SkeletonMap& map, const CropRect& rect) {
  SkeletonMap out(rect.row_end - rect.row_begin, rect.col_end - rect.col_begin, map.sigma);
  for (int ch = 0; ch < SkeletonMap::kChannels; ++ch)
    for (int r = 0; r < out.height; ++r)
      for (int c = 0; c < out.width; ++c)
        out.at(ch, r, c) = map.at(ch, rect.row_begin + r, rect.col_begin + c);
  return out;
}

// Source coordinate and blend weight for one output index.
struct Tap {
  int lo = 0;
  int hi = 0;
  double frac = 0.0;
};

std::vector<Tap> taps(int in, int out) {
  std::vector<Tap> result(out);
  for (int o = 0; o < out; ++o) {
    double pos = 0.0;
    if (out > 1) pos = static_cast<double>(o) * (in - 1) / (out - 1);
    const int lo = std::min(static_cast<int>(std::floor(pos)), in - 1);
    result[o] = {lo, std::min(lo + 1, in - 1), pos - lo};
  }
  return result;
}

}  // namespace

CropRect subject_crop_rect(const SkeletonMap& map, int body_height, double epsilon) {
  if (body_height < 1 || body_height > map.width)
    throw ConfigError("body height must lie in [1, map width]");
  int first = -1;
  int last = -1;
  for (int r = 0; r < map.height; ++r) {
    bool hot = false;
    for (int ch = 0; ch < SkeletonMap::kChannels && !hot; ++ch)
      for (int c = 0; c < map.width && !hot; ++c) hot = map.at(ch, r, c) > epsilon;
    if (hot) {
      if (first < 0) first = r;
      last = r;
    }
  }
  if (first < 0) throw EmptyMap("no pixel above the crop threshold");
  const int col_begin = (map.width - body_height) / 2;
  return {first, last + 1, col_begin, col_begin + body_height};
}

SkeletonMap subject_centered_crop(const SkeletonMap& map, int body_height, double epsilon) {
  return extract(map, subject_crop_rect(map, body_height, epsilon));
}

SkeletonMap resize_bilinear(const SkeletonMap& map, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) throw ConfigError("output size must be positive");
  if (map.height < 1 || map.width < 1) throw ShapeError("cannot resize an empty map");
  const std::vector<Tap> ys = taps(map.height, out_h);
  const std::vector<Tap> xs = taps(map.width, out_w);
  SkeletonMap out(out_h, out_w, map.sigma);
  for (int ch = 0; ch < SkeletonMap::kChannels; ++ch) {
    for (int r = 0; r < out_h; ++r) {
      const Tap& ty = ys[r];
      for (int c = 0; c < out_w; ++c) {
        const Tap& tx = xs[c];
        const double top = (1.0 - tx.frac) * map.at(ch, ty.lo, tx.lo) + tx.frac * map.at(ch, ty.lo, tx.hi);
        const double bottom =
            (1.0 - tx.frac) * map.at(ch, ty.hi, tx.lo) + tx.frac * map.at(ch, ty.hi, tx.hi);
        out.at(ch, r, c) = static_cast<float>((1.0 - ty.frac) * top + ty.frac * bottom);
      }
    }
  }
  return out;
}

SkeletonMap double_side_cut(const SkeletonMap& map, int keep_width) {
  if (keep_width < 1 || keep_width > map.width || (map.width - keep_width) % 2 != 0)
    throw ShapeError("cannot cut width " + std::to_string(map.width) + " symmetrically to " +
                     std::to_string(keep_width));
  const int margin = (map.width - keep_width) / 2;
  return extract(map, {0, map.height, margin, margin + keep_width});
}

SkeletonMap double_side_cut(const SkeletonMap& map) {
  if (map.width != kModelHeight)
    throw ShapeError("double-side cut expects width 64, got " + std::to_string(map.width));
  return double_side_cut(map, kModelWidth);
}

FramedMap frame_skeleton_map(const SkeletonMap& map, int body_height, int out_h, int out_w,
                             double epsilon) {
  if (out_w > out_h || (out_h - out_w) % 2 != 0)
    throw ConfigError("output width must not exceed height and differ from it by an even count");
  const CropRect rect = subject_crop_rect(map, body_height, epsilon);
  SkeletonMap resized = resize_bilinear(extract(map, rect), out_h, out_h);
  return {double_side_cut(resized, out_w), rect};
}

}  // namespace gaitmap
