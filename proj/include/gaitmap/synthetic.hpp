// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Seeded synthetic COCO-17 pose data for demos, tests and benchmarks.

#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "gaitmap/pose.hpp"

namespace gaitmap {

struct WalkParams {
  int frames = 40;
  double body_height_px = 200.0;  // nose-to-ankle height at the first frame
  double start_x = 150.0;
  double start_y = 300.0;  // hip midpoint at the first frame
  double speed_px = 4.0;   // horizontal hip motion per frame
  double zoom_per_frame = 0.002;
  double cadence = 0.07;  // gait cycles per frame
  double noise_px = 1.5;
  double dropout = 0.03;  // probability of a zero-confidence joint
};

/// A side-view walk cycle with trajectory, zoom, jitter and dropped joints.
PoseSequence synthesize_walk(const WalkParams& params, std::uint64_t seed,
                             std::string subject_id = "synthetic",
                             std::string sequence_id = "walk");

/// K joints scattered around a random body box at a random image position,
/// with confidences in [0.05, 1]. The frame always has a non-zero vertical extent.
PoseFrame random_pose_frame(std::mt19937_64& rng, std::size_t joint_count);

/// Writes `sequences` synthetic walks (varied length, speed and zoom) as pose
/// files under `dir/poses/` plus `dir/manifest.jsonl`, and returns the
/// manifest path. Subjects are named "s00", "s01", ...; sequences "walk".
/// Throws IoError.
std::string write_synthetic_dataset(const std::string& dir, int sequences, std::uint64_t seed);

}  // namespace gaitmap
