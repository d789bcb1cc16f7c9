// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Keypoints, frames, sequences and skeleton topology, plus the JSON-lines
// pose reader.

#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gaitmap {

/// One 2D joint detection in image-pixel units. `c` is confidence in [0, 1].
struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double c = 0.0;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

/// An ordered joint-index pair (from, to).
struct Limb {
  std::size_t from = 0;
  std::size_t to = 0;

  friend bool operator==(const Limb&, const Limb&) = default;
};

/// Skeleton topology: joint count, limb list and the two hip joints whose
/// midpoint anchors normalization. Indices are zero-based.
class Topology {
 public:
  /// Throws ValidationError unless K >= 2, at least one limb, every limb
  /// endpoint < K with distinct endpoints, and distinct valid hips.
  Topology(std::size_t joint_count, std::vector<Limb> limbs, std::size_t hip_left,
           std::size_t hip_right);

  std::size_t joint_count() const noexcept { return joint_count_; }
  const std::vector<Limb>& limbs() const noexcept { return limbs_; }
  std::size_t hip_left() const noexcept { return hip_left_; }
  std::size_t hip_right() const noexcept { return hip_right_; }

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  std::size_t joint_count_;
  std::vector<Limb> limbs_;
  std::size_t hip_left_;
  std::size_t hip_right_;
};

/// COCO 17-keypoint topology with the standard 19-edge skeleton.
/// Hips are joints 11 (left) and 12 (right). See docs/formats.md.
const Topology& coco17_topology();

struct PoseFrame {
  std::vector<Keypoint> joints;
  std::int64_t frame_index = 0;

  friend bool operator==(const PoseFrame&, const PoseFrame&) = default;
};

/// A validated, single-person pose track. Frames are non-empty with strictly
/// increasing frame indices and exactly `topology.joint_count()` joints each.
struct PoseSequence {
  std::vector<PoseFrame> frames;
  std::string subject_id;
  std::string sequence_id;
  Topology topology;
  /// Confidences outside [0, 1] that were clamped while parsing.
  std::size_t clamped_confidences = 0;
};

/// Reads the JSON-lines pose format, one `{"frame": n, "kps": [[x, y, c], ...]}`
/// object per line. Blank lines are ignored.
///
/// Throws ParseError (malformed JSON, with the 1-based line number),
/// SchemaError (missing keys, wrong joint count or triplet arity) or
/// ValidationError (non-finite coordinates, non-increasing frame index,
/// empty input).
PoseSequence parse_pose_stream(std::istream& in, const Topology& topology,
                               std::string subject_id = {}, std::string sequence_id = {});
PoseSequence parse_pose_text(std::string_view text, const Topology& topology,
                             std::string subject_id = {}, std::string sequence_id = {});
PoseSequence parse_pose_file(const std::string& path, const Topology& topology,
                             std::string subject_id = {}, std::string sequence_id = {});

/// Writes `seq` in the JSON-lines format. Every coordinate is emitted with the
/// shortest round-tripping representation, so re-parsing is bit-exact.
void write_pose_stream(std::ostream& out, const PoseSequence& seq);

}  // namespace gaitmap
