// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"
#include "gaitmap/errors.hpp"
#include "gaitmap/normalization.hpp"
#include "gaitmap/synthetic.hpp"
#include "support/example_frame.hpp"

using namespace gaitmap;
using gaitmap::testing::four_joint_frame;
using gaitmap::testing::four_joint_topology;

namespace {

double hip_mid_x(const NormalizedFrame& n, const Topology& t) {
  return (n.joints[t.hip_left()].x + n.joints[t.hip_right()].x) / 2;
}
double hip_mid_y(const NormalizedFrame& n, const Topology& t) {
  return (n.joints[t.hip_left()].y + n.joints[t.hip_right()].y) / 2;
}

double confident_extent(const NormalizedFrame& n) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& kp : n.joints) {
    if (kp.c == 0) continue;
    lo = std::min(lo, kp.y);
    hi = std::max(hi, kp.y);
  }
  return hi - lo;
}

}  // namespace

TEST_CASE("hand-derived four-joint example") {
  const NormalizedFrame n = normalize_frame(four_joint_frame(), four_joint_topology(), 64, 128);
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(n.joints[k].x - gaitmap::testing::kFourJointExpected[k][0]) <= 1e-9);
    CHECK(std::abs(n.joints[k].y - gaitmap::testing::kFourJointExpected[k][1]) <= 1e-9);
    CHECK(n.joints[k].c == 1.0);
  }
  CHECK(n.x_core == 110);
  CHECK(n.y_core == 200);
  CHECK(n.y_min == 100);
  CHECK(n.y_max == 300);
}

TEST_CASE("already-normalized frame is a fixed point") {
  // Hips symmetric about (64, 64) and y-extent exactly 64.
  const PoseFrame frame{{{64, 32, 0.7}, {58, 64, 1}, {70, 64, 0.4}, {61, 96, 0.9}}, 3};
  const NormalizedFrame n = normalize_frame(frame, four_joint_topology(), 64, 128);
  for (int k = 0; k < 4; ++k) {
    CHECK(n.joints[k].x == frame.joints[k].x);
    CHECK(n.joints[k].y == frame.joints[k].y);
    CHECK(n.joints[k].c == frame.joints[k].c);
  }
}

TEST_CASE("degenerate and invalid inputs") {
  const PoseFrame point{{{5, 5, 1}, {5, 5, 1}, {5, 5, 1}, {5, 5, 1}}, 0};
  CHECK_THROWS_AS(normalize_frame(point, four_joint_topology(), 64, 128), DegenerateFrame);
  const PoseFrame blind{{{5, 1, 0}, {5, 2, 0}, {5, 3, 0}, {5, 4, 0}}, 0};
  CHECK_THROWS_AS(normalize_frame(blind, four_joint_topology(), 64, 128), DegenerateFrame);
  CHECK_THROWS_AS(normalize_frame(four_joint_frame(), four_joint_topology(), 64, 63), ConfigError);
  CHECK_THROWS_AS(normalize_frame(four_joint_frame(), four_joint_topology(), 0, 63), ConfigError);
  CHECK_THROWS_AS(normalize_frame(four_joint_frame(), coco17_topology(), 64, 128), ValidationError);
}

TEST_CASE("zero-confidence joints are excluded from the vertical extent") {
  PoseFrame frame = four_joint_frame();
  frame.joints[0] = {110, -5000, 0.0};  // far outlier, no confidence
  const NormalizedFrame n = normalize_frame(frame, four_joint_topology(), 64, 128);
  CHECK(n.y_min == 200);
  CHECK(n.y_max == 300);
  CHECK(std::abs(confident_extent(n) - 64) <= 1e-9);
}

TEST_CASE("invariants on random frames") {
  std::mt19937_64 rng(7);
  const Topology& topo = coco17_topology();
  std::uniform_real_distribution<double> shift(-1e4, 1e4);
  std::uniform_real_distribution<double> log_scale(std::log(1e-2), std::log(1e2));
  for (int trial = 0; trial < 300; ++trial) {
    const PoseFrame frame = random_pose_frame(rng, 17);
    const NormalizedFrame n = normalize_frame(frame, topo, 64, 128);
    CHECK(std::abs(hip_mid_x(n, topo) - 64) <= 1e-9);
    CHECK(std::abs(hip_mid_y(n, topo) - 64) <= 1e-9);
    CHECK(std::abs(confident_extent(n) - 64) <= 1e-9);

    PoseFrame moved = frame;
    const double dx = shift(rng), dy = shift(rng);
    const double lambda = std::exp(log_scale(rng));
    PoseFrame scaled = frame;
    for (auto& kp : moved.joints) {
      kp.x += dx;
      kp.y += dy;
    }
    for (auto& kp : scaled.joints) {
      kp.x *= lambda;
      kp.y *= lambda;
    }
    const NormalizedFrame nm = normalize_frame(moved, topo, 64, 128);
    const NormalizedFrame ns = normalize_frame(scaled, topo, 64, 128);
    for (std::size_t k = 0; k < 17; ++k) {
      const double scale = std::max(1.0, std::abs(n.joints[k].x) + std::abs(n.joints[k].y));
      CHECK(std::abs(nm.joints[k].x - n.joints[k].x) <= 1e-9 * scale);
      CHECK(std::abs(nm.joints[k].y - n.joints[k].y) <= 1e-9 * scale);
      CHECK(std::abs(ns.joints[k].x - n.joints[k].x) <= 1e-9 * scale);
      CHECK(std::abs(ns.joints[k].y - n.joints[k].y) <= 1e-9 * scale);
      CHECK(n.joints[k].c == frame.joints[k].c);
    }
  }
}

TEST_CASE("literal mode maps the vertical extent onto [0, H]") {
  const NormalizedFrame n = normalize_frame(four_joint_frame(), four_joint_topology(), 64, 128,
                                            NormalizationMode::kLiteral);
  // Shifted ys are -36, 64, 64, 164 -> y_min -36, span 200.
  CHECK(std::abs(n.joints[0].y - 0) <= 1e-12);
  CHECK(std::abs(n.joints[3].y - 64) <= 1e-12);
  CHECK(std::abs(n.joints[1].y - 32) <= 1e-12);
  // x is offset by the shifted y_min: (54 + 36) / 200 * 64.
  CHECK(std::abs(n.joints[1].x - 28.8) <= 1e-12);
  // The hip midpoint is no longer at the canvas center.
  CHECK(std::abs(hip_mid_y(n, four_joint_topology()) - 64) > 1.0);
}
