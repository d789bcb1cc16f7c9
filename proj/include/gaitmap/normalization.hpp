// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "gaitmap/pose.hpp"

namespace gaitmap {

enum class NormalizationMode {
  /// One similarity transform about the hip midpoint: the hip midpoint lands
  /// on (R/2, R/2) and the confident joints' vertical extent becomes H.
  kAnchored,
  /// The four-step shift-then-rescale form, kept for comparison. It maps the
  /// vertical extent to [0, H], so the hip midpoint is not at the canvas centre.
  kLiteral,
};

/// Joints in canvas coordinates, together with the quantities used to get there.
struct NormalizedFrame {
  std::vector<Keypoint> joints;
  int canvas = 0;       // R
  int body_height = 0;  // H
  double x_core = 0.0;  // hip midpoint, raw coordinates
  double y_core = 0.0;
  double y_min = 0.0;  // extent over joints with c > 0, raw coordinates
  double y_max = 0.0;
};

/// Centers and scales one frame onto an R x R canvas.
///
/// For the anchored mode, with s = H / (y_max - y_min):
///   x' = (x - x_core) * s + R/2,   y' = (y - y_core) * s + R/2.
/// Joints with c == 0 are ignored for the extent; confidences pass through.
///
/// Throws ConfigError if H < 1 or R < H, ValidationError if the joint count
/// does not match the topology, and DegenerateFrame if no joint has c > 0 or
/// the extent is zero.
NormalizedFrame normalize_frame(const PoseFrame& frame, const Topology& topology, int body_height,
                                int canvas, NormalizationMode mode = NormalizationMode::kAnchored);

}  // namespace gaitmap
