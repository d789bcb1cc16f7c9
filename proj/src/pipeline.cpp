// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <utility>

#include "gaitmap/errors.hpp"
#include "gaitmap/parallel.hpp"
#include "gaitmap/png_export.hpp"
#include "json.hpp"

namespace gaitmap {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Sequences are processed in batches so memory stays bounded on large manifests.
constexpr std::size_t kBatchSequences = 64;

void check_id(const std::string& id, std::size_t line_no, const char* field) {
  const bool bad = id.empty() || id == "." || id == ".." ||
                   id.find_first_of("/\\") != std::string::npos ||
                   id.find('\0') != std::string::npos;
  if (bad) {
    throw ValidationError("manifest line " + std::to_string(line_no) + ": invalid " + field +
                          " \"" + id + "\"");
  }
}

std::string required_string(const json& doc, const char* key, std::size_t line_no) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_string())
    throw SchemaError("manifest line " + std::to_string(line_no) + ": missing string \"" + key +
                      "\"");
  return it->get<std::string>();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct LoadedSequence {
  std::optional<PoseSequence> pose;
  std::string error;
};

struct SequenceWork {
  const ManifestEntry* entry = nullptr;
  LoadedSequence loaded;
  std::size_t first_job = 0;  // offset into the batch's frame outcomes
};

SequenceReport finish_sequence(const SequenceWork& work, const std::vector<FrameOutcome>& outcomes,
                               const PipelineConfig& cfg) {
  SequenceReport report;
  report.subject_id = work.entry->subject_id;
  report.sequence_id = work.entry->sequence_id;
  if (!work.loaded.pose) {
    report.failure = work.loaded.error;
    return report;
  }
  const PoseSequence& seq = *work.loaded.pose;
  report.input_frames = seq.frames.size();
  report.clamped_confidences = seq.clamped_confidences;

  std::vector<const FramedMap*> kept;
  kept.reserve(seq.frames.size());
  for (std::size_t f = 0; f < seq.frames.size(); ++f) {
    const FrameOutcome& outcome = outcomes[work.first_job + f];
    if (const auto* framed = std::get_if<FramedMap>(&outcome)) {
      kept.push_back(framed);
      continue;
    }
    ++report.skipped_degenerate;
    if (!cfg.skip_degenerate && !report.failure) {
      report.failure = "frame " + std::to_string(seq.frames[f].frame_index) + ": " +
                       std::get<SkippedFrame>(outcome).reason;
    }
  }
  report.processed_frames = kept.size();
  if (report.failure) return report;
  if (kept.empty()) {
    report.failure = "no renderable frames";
    return report;
  }

  std::vector<std::size_t> order(kept.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (cfg.segment_seed) {
    order = sample_segment(kept.size(), static_cast<std::size_t>(cfg.segment_len),
                           sequence_seed(*cfg.segment_seed, report.subject_id, report.sequence_id));
  }

  const auto h = static_cast<std::uint32_t>(cfg.out_h);
  const auto w = static_cast<std::uint32_t>(cfg.out_w);
  TensorFile tensor;
  tensor.dims = {static_cast<std::uint32_t>(order.size()), 2, h, w};
  tensor.data.reserve(tensor.element_count());
  for (std::size_t idx : order) {
    const auto& data = kept[idx]->map.data;
    tensor.data.insert(tensor.data.end(), data.begin(), data.end());
  }

  const std::string path = tensor_output_path(cfg.output_dir, *work.entry);
  try {
    fs::create_directories(fs::path(path).parent_path());
    write_tensor_file(path, tensor);
    if (cfg.png_export) {
      const fs::path png_dir = fs::path(path).replace_extension("").string() + "_png";
      fs::create_directories(png_dir);
      for (std::size_t t = 0; t < order.size(); ++t) {
        char name[32];
        std::snprintf(name, sizeof(name), "%06zu.png", t);
        export_png(kept[order[t]]->map, (png_dir / name).string());
      }
    }
  } catch (const std::exception& e) {
    report.failure = std::string("write failed: ") + e.what();
    return report;
  }
  report.written_frames = order.size();
  report.output_path = path;
  return report;
}

}  // namespace

void PipelineConfig::validate() const {
  render_options().validate();
  if (body_height < 1) throw ConfigError("height must be positive");
  if (canvas < body_height) throw ConfigError("canvas R must be >= height H");
  if (out_h < 1 || out_w < 1) throw ConfigError("output size must be positive");
  if (out_w > out_h || (out_h - out_w) % 2 != 0)
    throw ConfigError("output width must be <= height with an even difference");
  if (!(epsilon_crop >= 0.0)) throw ConfigError("crop epsilon must be non-negative");
  if (segment_len < 1) throw ConfigError("segment length must be >= 1");
  if (threads < 1) throw ConfigError("thread count must be >= 1");
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path);
  const fs::path base = fs::path(path).parent_path();

  std::vector<ManifestEntry> entries;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (!doc.is_object()) throw SchemaError("manifest line " + std::to_string(line_no) + ": expected object");
    ManifestEntry entry{required_string(doc, "subject", line_no),
                        required_string(doc, "sequence", line_no),
                        required_string(doc, "pose", line_no)};
    check_id(entry.subject_id, line_no, "subject");
    check_id(entry.sequence_id, line_no, "sequence");
    if (!seen.emplace(entry.subject_id, entry.sequence_id).second)
      throw ValidationError("manifest line " + std::to_string(line_no) + ": duplicate sequence " +
                            entry.subject_id + "/" + entry.sequence_id);
    const fs::path pose(entry.pose_path);
    entry.pose_path = (pose.is_absolute() ? pose : base / pose).string();
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string tensor_output_path(const std::string& output_dir, const ManifestEntry& entry) {
  return (fs::path(output_dir) / entry.subject_id / (entry.sequence_id + ".gmap")).string();
}

std::vector<std::size_t> sample_segment(std::size_t seq_len, std::size_t segment_len,
                                        std::uint64_t rng_seed) {
  if (seq_len == 0 || segment_len == 0) throw ConfigError("sequence and segment must be non-empty");
  std::vector<std::size_t> indices(segment_len);
  if (seq_len < segment_len) {
    for (std::size_t i = 0; i < segment_len; ++i) indices[i] = i % seq_len;
    return indices;
  }
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, seq_len - segment_len);
  const std::size_t start = pick(rng);
  for (std::size_t i = 0; i < segment_len; ++i) indices[i] = start + i;
  return indices;
}

std::uint64_t sequence_seed(std::uint64_t base_seed, const std::string& subject_id,
                            const std::string& sequence_id) {
  // FNV-1a over "subject\0sequence", mixed with the base seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (unsigned char c : subject_id) feed(c);
  feed(0);
  for (unsigned char c : sequence_id) feed(c);
  return splitmix64(base_seed ^ h);
}

FrameOutcome process_frame(const PoseFrame& frame, const Topology& topology,
                           const PipelineConfig& cfg) {
  try {
    const NormalizedFrame norm =
        normalize_frame(frame, topology, cfg.body_height, cfg.canvas, cfg.normalization);
    const SkeletonMap map = render_skeleton_map(norm, topology, cfg.render_options());
    return frame_skeleton_map(map, cfg.body_height, cfg.out_h, cfg.out_w, cfg.epsilon_crop);
  } catch (const DegenerateFrame& e) {
    return SkippedFrame{e.what()};
  } catch (const EmptyMap& e) {
    return SkippedFrame{e.what()};
  }
}

std::size_t RunReport::failure_count() const {
  return static_cast<std::size_t>(std::count_if(sequences.begin(), sequences.end(),
                                                [](const auto& s) { return s.failure.has_value(); }));
}

std::size_t RunReport::total_frames() const {
  std::size_t n = 0;
  for (const auto& s : sequences) n += s.input_frames;
  return n;
}

std::size_t RunReport::total_skipped() const {
  std::size_t n = 0;
  for (const auto& s : sequences) n += s.skipped_degenerate;
  return n;
}

std::string RunReport::to_json() const {
  json seqs = json::array();
  std::size_t clamped = 0;
  for (const auto& s : sequences) {
    clamped += s.clamped_confidences;
    json item = {{"subject", s.subject_id},
                 {"sequence", s.sequence_id},
                 {"input_frames", s.input_frames},
                 {"processed_frames", s.processed_frames},
                 {"skipped_degenerate", s.skipped_degenerate},
                 {"clamped_confidences", s.clamped_confidences},
                 {"written_frames", s.written_frames},
                 {"output", s.output_path.empty() ? json(nullptr)
                                                  : json(s.subject_id + "/" + s.sequence_id + ".gmap")}};
    item["failure"] = s.failure ? json(*s.failure) : json(nullptr);
    seqs.push_back(std::move(item));
  }
  json doc = {{"sequences", std::move(seqs)},
              {"totals",
               {{"sequences", sequences.size()},
                {"failures", failure_count()},
                {"frames", total_frames()},
                {"skipped_degenerate", total_skipped()},
                {"clamped_confidences", clamped}}}};
  return doc.dump(2);
}

RunReport run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const std::vector<ManifestEntry> manifest = read_manifest(cfg.manifest_path);
  fs::create_directories(cfg.output_dir);
  const Topology& topology = coco17_topology();

  RunReport report;
  report.sequences.reserve(manifest.size());
  for (std::size_t begin = 0; begin < manifest.size(); begin += kBatchSequences) {
    const std::size_t end = std::min(manifest.size(), begin + kBatchSequences);
    std::vector<SequenceWork> batch(end - begin);
    for (std::size_t s = 0; s < batch.size(); ++s) batch[s].entry = &manifest[begin + s];

    parallel_for(batch.size(), cfg.threads, [&](std::size_t s) {
      SequenceWork& work = batch[s];
      try {
        work.loaded.pose = parse_pose_file(work.entry->pose_path, topology,
                                           work.entry->subject_id, work.entry->sequence_id);
      } catch (const Error& e) {
        work.loaded.error = e.what();
      }
    });

    // Flatten every frame of the batch into one job list, in manifest order.
    std::vector<const PoseFrame*> jobs;
    for (auto& work : batch) {
      work.first_job = jobs.size();
      if (!work.loaded.pose) continue;
      for (const auto& frame : work.loaded.pose->frames) jobs.push_back(&frame);
    }
    std::vector<FrameOutcome> outcomes(jobs.size());
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
      outcomes[j] = process_frame(*jobs[j], topology, cfg);
    });

    std::vector<SequenceReport> reports(batch.size());
    parallel_for(batch.size(), cfg.threads,
                 [&](std::size_t s) { reports[s] = finish_sequence(batch[s], outcomes, cfg); });
    for (auto& r : reports) report.sequences.push_back(std::move(r));
  }

  const std::string text = report.to_json() + "\n";
  write_file_bytes((fs::path(cfg.output_dir) / "report.json").string(),
                   {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  return report;
}

}  // namespace gaitmap
