// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// The hand-derived 4-joint example: head, left hip, right hip, ankle.

#pragma once

#include "gaitmap/pose.hpp"

namespace gaitmap::testing {

inline const Topology& four_joint_topology() {
  static const Topology topo(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, 1, 2);
  return topo;
}

inline PoseFrame four_joint_frame() {
  return {{{110, 100, 1}, {100, 200, 1}, {120, 200, 1}, {110, 300, 1}}, 0};
}

// H = 64, R = 128: s = 64 / 200 = 0.32, hip midpoint (110, 200).
inline constexpr double kFourJointExpected[4][2] = {{64, 32}, {60.8, 64}, {67.2, 64}, {64, 96}};

}  // namespace gaitmap::testing
