// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/synthetic.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "gaitmap/errors.hpp"
#include "json.hpp"

namespace gaitmap {

namespace {

// Body-frame template: hip midpoint at the origin, y down, unit = body height.
// Left joints sit slightly toward -x (the far side in a side view).
struct Template {
  double x;
  double y;
};

constexpr std::array<Template, 17> kRestPose = {{
    {0.03, -0.52},  // nose
    {0.03, -0.54},  {0.02, -0.54},    // eyes
    {-0.01, -0.53}, {-0.02, -0.53},   // ears
    {-0.02, -0.40}, {0.02, -0.40},    // shoulders
    {-0.02, -0.24}, {0.02, -0.24},    // elbows
    {-0.02, -0.09}, {0.02, -0.09},    // wrists
    {-0.015, 0.0},  {0.015, 0.0},     // hips
    {-0.015, 0.23}, {0.015, 0.23},    // knees
    {-0.015, 0.46}, {0.015, 0.46},    // ankles
}};

}  // namespace

PoseSequence synthesize_walk(const WalkParams& params, std::uint64_t seed, std::string subject_id,
                             std::string sequence_id) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, params.noise_px);
  std::uniform_real_distribution<double> confidence(0.6, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double phase0 = unit(rng) * 2.0 * std::numbers::pi;

  PoseSequence seq{{}, std::move(subject_id), std::move(sequence_id), coco17_topology(), 0};
  for (int t = 0; t < params.frames; ++t) {
    const double height = params.body_height_px * (1.0 + params.zoom_per_frame * t);
    const double phase = phase0 + 2.0 * std::numbers::pi * params.cadence * t;
    const double swing = std::sin(phase);
    const double hip_x = params.start_x + params.speed_px * t;
    const double hip_y = params.start_y + 0.01 * height * std::cos(2.0 * phase);

    std::array<Template, 17> pose = kRestPose;
    // Legs swing in antiphase, arms oppose the legs on the same side.
    const double left = swing;
    const double right = -swing;
    pose[13].x += 0.08 * left;
    pose[15].x += 0.17 * left;
    pose[14].x += 0.08 * right;
    pose[16].x += 0.17 * right;
    pose[7].x += 0.05 * right;
    pose[9].x += 0.10 * right;
    pose[8].x += 0.05 * left;
    pose[10].x += 0.10 * left;
    // Lifted foot rises slightly.
    pose[15].y -= 0.03 * std::max(0.0, std::cos(phase));
    pose[16].y -= 0.03 * std::max(0.0, -std::cos(phase));

    PoseFrame frame;
    frame.frame_index = t;
    frame.joints.reserve(pose.size());
    for (const auto& p : pose) {
      Keypoint kp{hip_x + p.x * height + jitter(rng), hip_y + p.y * height + jitter(rng),
                  confidence(rng)};
      if (unit(rng) < params.dropout) kp.c = 0.0;
      frame.joints.push_back(kp);
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

PoseFrame random_pose_frame(std::mt19937_64& rng, std::size_t joint_count) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double cx = 50.0 + 900.0 * unit(rng);
  const double cy = 50.0 + 600.0 * unit(rng);
  const double height = 20.0 + 400.0 * unit(rng);
  const double width = height * (0.2 + 0.8 * unit(rng));

  PoseFrame frame;
  frame.joints.resize(joint_count);
  for (auto& kp : frame.joints) {
    kp.x = cx + width * (unit(rng) - 0.5);
    kp.y = cy + height * (unit(rng) - 0.5);
    kp.c = 0.05 + 0.95 * unit(rng);
  }
  // Pin two joints to the box's top and bottom so the extent is never zero.
  frame.joints.front().y = cy - height / 2;
  frame.joints.back().y = cy + height / 2;
  return frame;
}

std::string write_synthetic_dataset(const std::string& dir, int sequences, std::uint64_t seed) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root / "poses", ec);
  if (ec) throw IoError("cannot create " + (root / "poses").string() + ": " + ec.message());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::string manifest_path = (root / "manifest.jsonl").string();
  std::ofstream manifest(manifest_path);
  if (!manifest) throw IoError("cannot create " + manifest_path);
  for (int s = 0; s < sequences; ++s) {
    char subject[16];
    std::snprintf(subject, sizeof(subject), "s%02d", s);
    WalkParams params;
    params.frames = 12 + static_cast<int>(unit(rng) * 40);
    params.body_height_px = 120.0 + 200.0 * unit(rng);
    params.start_x = 100.0 + 300.0 * unit(rng);
    params.speed_px = 2.0 + 6.0 * unit(rng);
    params.zoom_per_frame = 0.004 * (unit(rng) - 0.5);
    const PoseSequence seq = synthesize_walk(params, rng(), subject, "walk");

    const std::string rel = std::string("poses/") + subject + "_walk.jsonl";
    std::ofstream pose((root / rel).string());
    if (!pose) throw IoError("cannot create " + (root / rel).string());
    write_pose_stream(pose, seq);
    if (!pose) throw IoError("write failure on " + (root / rel).string());
    manifest << nlohmann::json{{"subject", subject}, {"sequence", "walk"}, {"pose", rel}}.dump() << "\n";
  }
  if (!manifest) throw IoError("write failure on " + manifest_path);
  return manifest_path;
}

}  // namespace gaitmap
