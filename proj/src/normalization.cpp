// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/normalization.hpp"

#include <algorithm>
#include <limits>

#include "gaitmap/errors.hpp"

namespace gaitmap {

namespace {

struct Extent {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool any = false;
};

Extent confident_y_extent(const std::vector<Keypoint>& joints) {
  Extent e;
  for (const auto& kp : joints) {
    if (kp.c == 0.0) continue;
    e.lo = std::min(e.lo, kp.y);
    e.hi = std::max(e.hi, kp.y);
    e.any = true;
  }
  return e;
}

}  // namespace

NormalizedFrame normalize_frame(const PoseFrame& frame, const Topology& topology, int body_height,
                                int canvas, NormalizationMode mode) {
  if (body_height < 1) throw ConfigError("body height must be positive");
  if (canvas < body_height) throw ConfigError("canvas R must be >= body height H");
  if (frame.joints.size() != topology.joint_count())
    throw ValidationError("joint count does not match topology");

  const Extent raw = confident_y_extent(frame.joints);
  if (!raw.any) throw DegenerateFrame("frame has no joint with positive confidence");
  if (!(raw.hi > raw.lo)) throw DegenerateFrame("frame has zero vertical extent");

  const Keypoint& hip_l = frame.joints[topology.hip_left()];
  const Keypoint& hip_r = frame.joints[topology.hip_right()];

  NormalizedFrame out;
  out.canvas = canvas;
  out.body_height = body_height;
  out.x_core = (hip_l.x + hip_r.x) / 2.0;
  out.y_core = (hip_l.y + hip_r.y) / 2.0;
  out.y_min = raw.lo;
  out.y_max = raw.hi;
  out.joints.reserve(frame.joints.size());

  const double half = canvas / 2.0;
  const double height = body_height;

  if (mode == NormalizationMode::kAnchored) {
    const double s = height / (raw.hi - raw.lo);
    for (const auto& kp : frame.joints)
      out.joints.push_back({(kp.x - out.x_core) * s + half, (kp.y - out.y_core) * s + half, kp.c});
    return out;
  }

  // Literal four-step form: shift, then rescale both axes by the shifted
  // vertical extent (x is offset by y_min as written).
  std::vector<Keypoint> shifted;
  shifted.reserve(frame.joints.size());
  for (const auto& kp : frame.joints)
    shifted.push_back({kp.x - out.x_core + half, kp.y - out.y_core + half, kp.c});
  const Extent sh = confident_y_extent(shifted);
  const double span = sh.hi - sh.lo;
  for (const auto& kp : shifted)
    out.joints.push_back({(kp.x - sh.lo) / span * height, (kp.y - sh.lo) / span * height, kp.c});
  return out;
}

}  // namespace gaitmap
