// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/pose.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gaitmap/errors.hpp"
#include "json.hpp"

namespace gaitmap {

using json = nlohmann::json;

Topology::Topology(std::size_t joint_count, std::vector<Limb> limbs, std::size_t hip_left,
                   std::size_t hip_right)
    : joint_count_(joint_count),
      limbs_(std::move(limbs)),
      hip_left_(hip_left),
      hip_right_(hip_right) {
  if (joint_count_ < 2) throw ValidationError("topology needs at least 2 joints");
  if (limbs_.empty()) throw ValidationError("topology needs at least 1 limb");
  for (const auto& limb : limbs_) {
    if (limb.from >= joint_count_ || limb.to >= joint_count_)
      throw ValidationError("limb endpoint out of range");
    if (limb.from == limb.to) throw ValidationError("limb endpoints must differ");
  }
  if (hip_left_ >= joint_count_ || hip_right_ >= joint_count_)
    throw ValidationError("hip index out of range");
  if (hip_left_ == hip_right_) throw ValidationError("hip joints must differ");
}

const Topology& coco17_topology() {
  // 0 nose, 1/2 eyes, 3/4 ears, 5/6 shoulders, 7/8 elbows, 9/10 wrists,
  // 11/12 hips, 13/14 knees, 15/16 ankles (left/right).
  static const Topology topo(17,
                             {
                                 {11, 13}, {13, 15}, {12, 14}, {14, 16},  // legs
                                 {11, 12},                                // pelvis
                                 {5, 11},  {6, 12},                       // torso sides
                                 {5, 6},                                  // shoulders
                                 {5, 7},   {6, 8},   {7, 9},   {8, 10},   // arms
                                 {1, 2},   {0, 1},   {0, 2},              // face
                                 {1, 3},   {2, 4},   {3, 5},   {4, 6},    // ears to shoulders
                             },
                             11, 12);
  return topo;
}

namespace {

double clamp_confidence(double c, std::size_t& clamped) {
  if (c < 0.0) {
    ++clamped;
    return 0.0;
  }
  if (c > 1.0) {
    ++clamped;
    return 1.0;
  }
  return c;
}

PoseFrame parse_frame_line(const std::string& line, std::size_t line_no, const Topology& topology,
                           std::size_t& clamped) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::out_of_range& e) {
    // Number overflow (e.g. 1e999) is the only way JSON can spell a non-finite value.
    throw ValidationError("line " + std::to_string(line_no) + ": non-finite coordinate");
  } catch (const json::exception& e) {
    throw ParseError(line_no, e.what());
  }

  if (!doc.is_object()) throw SchemaError("line " + std::to_string(line_no) + ": expected object");
  const auto frame_it = doc.find("frame");
  const auto kps_it = doc.find("kps");
  if (frame_it == doc.end() || !frame_it->is_number_integer())
    throw SchemaError("line " + std::to_string(line_no) + ": missing integer \"frame\"");
  if (kps_it == doc.end() || !kps_it->is_array())
    throw SchemaError("line " + std::to_string(line_no) + ": missing array \"kps\"");

  PoseFrame frame;
  frame.frame_index = frame_it->get<std::int64_t>();
  const std::string where = "frame " + std::to_string(frame.frame_index) + " (line " +
                            std::to_string(line_no) + ")";
  if (frame.frame_index < 0) throw ValidationError(where + ": negative frame_index");
  if (kps_it->size() != topology.joint_count()) {
    throw SchemaError(where + ": expected " + std::to_string(topology.joint_count()) +
                      " keypoints, got " + std::to_string(kps_it->size()));
  }

  frame.joints.reserve(kps_it->size());
  for (const auto& triplet : *kps_it) {
    if (!triplet.is_array() || triplet.size() != 3)
      throw SchemaError(where + ": keypoint must be [x, y, c]");
    for (const auto& v : triplet) {
      if (!v.is_number()) throw SchemaError(where + ": keypoint values must be numbers");
    }
    Keypoint kp{triplet[0].get<double>(), triplet[1].get<double>(), triplet[2].get<double>()};
    if (!std::isfinite(kp.x) || !std::isfinite(kp.y) || !std::isfinite(kp.c))
      throw ValidationError(where + ": non-finite coordinate");
    kp.c = clamp_confidence(kp.c, clamped);
    frame.joints.push_back(kp);
  }
  return frame;
}

}  // namespace

PoseSequence parse_pose_stream(std::istream& in, const Topology& topology,
                               std::string subject_id, std::string sequence_id) {
  PoseSequence seq{{}, std::move(subject_id), std::move(sequence_id), topology, 0};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    PoseFrame frame = parse_frame_line(line, line_no, topology, seq.clamped_confidences);
    if (!seq.frames.empty() && frame.frame_index <= seq.frames.back().frame_index) {
      throw ValidationError("frame " + std::to_string(frame.frame_index) + " (line " +
                            std::to_string(line_no) + "): non-increasing frame_index");
    }
    seq.frames.push_back(std::move(frame));
  }
  if (in.bad()) throw IoError("read failure");
  if (seq.frames.empty()) throw ValidationError("pose input contains no frames");
  return seq;
}

PoseSequence parse_pose_text(std::string_view text, const Topology& topology,
                             std::string subject_id, std::string sequence_id) {
  std::istringstream in{std::string(text)};
  return parse_pose_stream(in, topology, std::move(subject_id), std::move(sequence_id));
}

PoseSequence parse_pose_file(const std::string& path, const Topology& topology,
                             std::string subject_id, std::string sequence_id) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pose file " + path);
  return parse_pose_stream(in, topology, std::move(subject_id), std::move(sequence_id));
}

void write_pose_stream(std::ostream& out, const PoseSequence& seq) {
  for (const auto& frame : seq.frames) {
    json kps = json::array();
    for (const auto& kp : frame.joints) kps.push_back({kp.x, kp.y, kp.c});
    json line = {{"frame", frame.frame_index}, {"kps", std::move(kps)}};
    out << line.dump() << '\n';
  }
}

}  // namespace gaitmap
