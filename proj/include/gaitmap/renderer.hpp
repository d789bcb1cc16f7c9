// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Gaussian skeleton-map rendering. Channel 0 holds the joint map, channel 1
// the limb map. Gaussians are evaluated at integer pixel coordinates: pixel
// (i, j) is column i, row j, and sits at canvas position (x, y) = (i, j).

#pragma once

#include <cstddef>
#include <vector>

#include "gaitmap/normalization.hpp"
#include "gaitmap/pose.hpp"

namespace gaitmap {

inline constexpr double kDefaultSigma = 8.0;
inline constexpr double kDefaultTruncation = 6.0;

/// A 2-channel float image, row-major channel -> row -> column.
struct SkeletonMap {
  static constexpr int kChannels = 2;

  int height = 0;
  int width = 0;
  double sigma = 0.0;
  std::vector<float> data;

  SkeletonMap() = default;
  SkeletonMap(int h, int w, double s)
      : height(h), width(w), sigma(s), data(static_cast<std::size_t>(kChannels) * h * w, 0.0f) {}

  std::size_t index(int channel, int row, int col) const {
    return (static_cast<std::size_t>(channel) * height + row) * width + col;
  }
  float& at(int channel, int row, int col) { return data[index(channel, row, col)]; }
  float at(int channel, int row, int col) const { return data[index(channel, row, col)]; }

  friend bool operator==(const SkeletonMap&, const SkeletonMap&) = default;
};

struct RenderOptions {
  double sigma = kDefaultSigma;
  /// Support radius of each Gaussian in units of sigma (fast path only).
  double truncation_radius = kDefaultTruncation;

  /// Throws ConfigError unless sigma > 0 and truncation_radius >= 3.
  void validate() const;
};

/// R x R joint heatmap, row-major [row][col]:
///   J(i, j) = sum_k c_k * exp(-((i - x_k)^2 + (j - y_k)^2) / (2 sigma^2)).
std::vector<float> render_joint_map(const NormalizedFrame& frame, const RenderOptions& opts);

/// R x R limb heatmap: each limb contributes
///   min(c_from, c_to) * exp(-D^2 / (2 sigma^2))
/// where D is the distance from the pixel to the limb segment.
std::vector<float> render_limb_map(const NormalizedFrame& frame, const Topology& topology,
                                   const RenderOptions& opts);

/// Stacks the joint map (channel 0) and limb map (channel 1).
/// Accumulates in double over a truncated support and rounds once to float.
SkeletonMap render_skeleton_map(const NormalizedFrame& frame, const Topology& topology,
                                const RenderOptions& opts);

/// Reference renderer: every primitive evaluated at every pixel in double,
/// no truncation, rounded to float. Used as the oracle for the fast path.
SkeletonMap render_skeleton_map_bruteforce(const NormalizedFrame& frame, const Topology& topology,
                                           const RenderOptions& opts);

/// Squared Euclidean distance from (px, py) to the segment a-b, with the
/// projection parameter clamped to [0, 1].
double point_segment_distance_sq(double px, double py, double ax, double ay, double bx, double by);

}  // namespace gaitmap
