// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Subject-centered cropping, bilinear resizing and double-side cutting.

#pragma once

#include "gaitmap/renderer.hpp"

namespace gaitmap {

inline constexpr double kDefaultCropEpsilon = 1e-4;
inline constexpr int kModelHeight = 64;
inline constexpr int kModelWidth = 44;

/// Half-open pixel rectangle [row_begin, row_end) x [col_begin, col_end).
struct CropRect {
  int row_begin = 0;
  int row_end = 0;
  int col_begin = 0;
  int col_end = 0;

  friend bool operator==(const CropRect&, const CropRect&) = default;
};

/// The model-ready map plus the canvas rectangle it was cut from.
struct FramedMap {
  SkeletonMap map;
  CropRect source_crop;
};

/// Rows: first through last row whose maximum over both channels exceeds
/// `epsilon`. Columns: [(R - H) / 2, (R - H) / 2 + H).
/// Throws EmptyMap if no pixel exceeds `epsilon`, ConfigError if H is not in [1, width].
CropRect subject_crop_rect(const SkeletonMap& map, int body_height,
                           double epsilon = kDefaultCropEpsilon);

SkeletonMap subject_centered_crop(const SkeletonMap& map, int body_height,
                                  double epsilon = kDefaultCropEpsilon);

/// Per-channel bilinear resize with corner-aligned sampling: output index o
/// samples source position o * (in - 1) / (out - 1), or 0 when out == 1.
/// Interpolation runs in double and is rounded once to float.
/// Throws ConfigError for non-positive output sizes, ShapeError for an empty input.
SkeletonMap resize_bilinear(const SkeletonMap& map, int out_h, int out_w);

/// Removes (width - keep_width) / 2 columns from each side.
/// Throws ShapeError unless 1 <= keep_width <= width and the difference is even.
SkeletonMap double_side_cut(const SkeletonMap& map, int keep_width);

/// The fixed 64 -> 44 cut: keeps columns [10, 54). Throws ShapeError unless
/// the input is 64 columns wide.
SkeletonMap double_side_cut(const SkeletonMap& map);

/// crop -> resize to out_h x out_h -> symmetric cut to out_w.
FramedMap frame_skeleton_map(const SkeletonMap& map, int body_height, int out_h = kModelHeight,
                             int out_w = kModelWidth, double epsilon = kDefaultCropEpsilon);

}  // namespace gaitmap
