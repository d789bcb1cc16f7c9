// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Batch orchestration: manifest -> pose files -> normalize -> render ->
// crop/resize/cut -> (optional) fixed-length segment -> GMAP files.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gaitmap/framing.hpp"
#include "gaitmap/normalization.hpp"
#include "gaitmap/pose.hpp"
#include "gaitmap/renderer.hpp"
#include "gaitmap/tensor_file.hpp"

namespace gaitmap {

/// Sigma values of the standard ablation sweep.
inline constexpr std::array<double, 4> kSigmaSweep = {1.0, 4.0, 8.0, 16.0};
inline constexpr int kDefaultSegmentLength = 30;

struct PipelineConfig {
  double sigma = kDefaultSigma;
  double truncation_radius = kDefaultTruncation;
  int body_height = 64;  // H
  int canvas = 128;      // R
  int out_h = kModelHeight;
  int out_w = kModelWidth;
  double epsilon_crop = kDefaultCropEpsilon;
  int threads = 1;
  std::string manifest_path;
  std::string output_dir;
  bool png_export = false;
  int segment_len = kDefaultSegmentLength;
  /// When set, each sequence is reduced to one `segment_len` window drawn
  /// with a generator seeded from this value and the sequence's IDs.
  /// When unset, every processed frame is written.
  std::optional<std::uint64_t> segment_seed;
  bool skip_degenerate = true;
  NormalizationMode normalization = NormalizationMode::kAnchored;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  RenderOptions render_options() const { return {sigma, truncation_radius}; }
};

struct ManifestEntry {
  std::string subject_id;
  std::string sequence_id;
  std::string pose_path;  // resolved against the manifest's directory
};

/// JSON-lines manifest: `{"subject": "...", "sequence": "...", "pose": "rel/path.jsonl"}`.
/// Throws ParseError / SchemaError / ValidationError (bad or duplicate IDs) / IoError.
std::vector<ManifestEntry> read_manifest(const std::string& path);

/// Output location of a sequence's tensor file: `<out>/<subject>/<sequence>.gmap`.
std::string tensor_output_path(const std::string& output_dir, const ManifestEntry& entry);

/// Contiguous `segment_len` indices starting at a uniformly drawn offset in
/// [0, seq_len - segment_len]; shorter sequences cycle from index 0.
/// Throws ConfigError if seq_len or segment_len is zero.
std::vector<std::size_t> sample_segment(std::size_t seq_len, std::size_t segment_len,
                                        std::uint64_t rng_seed);

/// Generator seed for one sequence, independent of manifest order.
std::uint64_t sequence_seed(std::uint64_t base_seed, const std::string& subject_id,
                            const std::string& sequence_id);

/// A frame that could not be rendered: degenerate pose or an empty map.
struct SkippedFrame {
  std::string reason;
};

using FrameOutcome = std::variant<FramedMap, SkippedFrame>;

/// normalize -> render -> frame for one pose frame.
FrameOutcome process_frame(const PoseFrame& frame, const Topology& topology,
                           const PipelineConfig& cfg);

struct SequenceReport {
  std::string subject_id;
  std::string sequence_id;
  std::size_t input_frames = 0;
  std::size_t processed_frames = 0;
  std::size_t skipped_degenerate = 0;
  std::size_t clamped_confidences = 0;
  std::size_t written_frames = 0;
  std::string output_path;           // empty when nothing was written
  std::optional<std::string> failure;
};

struct RunReport {
  std::vector<SequenceReport> sequences;  // manifest order

  std::size_t failure_count() const;
  std::size_t total_frames() const;
  std::size_t total_skipped() const;
  /// Deterministic JSON rendering (no timings or thread counts). Output
  /// files are named relative to the output directory.
  std::string to_json() const;
};

/// Runs the whole manifest. Per-sequence failures (I/O, parse, all frames
/// skipped) are recorded in the report; configuration and manifest errors throw.
/// The report is also written to `<out>/report.json`.
/// Output bytes do not depend on `cfg.threads`.
RunReport run_pipeline(const PipelineConfig& cfg);

}  // namespace gaitmap
