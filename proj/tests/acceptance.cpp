// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "gaitmap/errors.hpp"
#include "gaitmap/framing.hpp"
#include "gaitmap/nn/grad_check.hpp"
#include "gaitmap/nn/toy_model.hpp"
#include "gaitmap/pipeline.hpp"
#include "gaitmap/synthetic.hpp"
#include "support/example_frame.hpp"
#include "support/random_frames.hpp"
#include "support/temp_dir.hpp"

using namespace gaitmap;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

Outcome rendering_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  float worst = 0.0f;
  int frames = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const NormalizedFrame f = testing::random_normalized_frame(rng);
    for (double sigma : kSigmaSweep) {
      const RenderOptions opts{sigma, kDefaultTruncation};
      const SkeletonMap fast = render_skeleton_map(f, coco17_topology(), opts);
      const SkeletonMap ref = render_skeleton_map_bruteforce(f, coco17_topology(), opts);
      for (std::size_t i = 0; i < fast.data.size(); ++i) worst = std::max(worst, std::abs(fast.data[i] - ref.data[i]));
    }
    ++frames;
  }
  const double t = seconds_since(start);
  return {worst <= 1e-6f && t <= 60.0,
          fmt("%d frames x 4 sigmas, max abs error %.3g, %.1f s", frames, static_cast<double>(worst), t)};
}

Outcome normalization_invariants() {
  std::mt19937_64 rng(1002);
  const Topology& topo = coco17_topology();
  std::uniform_real_distribution<double> shift(-1e4, 1e4);
  std::uniform_real_distribution<double> log_scale(std::log(1e-2), std::log(1e2));
  double anchor_err = 0, extent_err = 0, invariance_err = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const PoseFrame frame = random_pose_frame(rng, 17);
    const NormalizedFrame n = normalize_frame(frame, topo, 64, 128);
    const Keypoint& l = n.joints[topo.hip_left()];
    const Keypoint& r = n.joints[topo.hip_right()];
    anchor_err = std::max({anchor_err, std::abs((l.x + r.x) / 2 - 64), std::abs((l.y + r.y) / 2 - 64)});
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& kp : n.joints)
      if (kp.c > 0) {
        lo = std::min(lo, kp.y);
        hi = std::max(hi, kp.y);
      }
    extent_err = std::max(extent_err, std::abs(hi - lo - 64));

    PoseFrame moved = frame, scaled = frame;
    const double dx = shift(rng), dy = shift(rng), lambda = std::exp(log_scale(rng));
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
    for (std::size_t k = 0; k < n.joints.size(); ++k) {
      const double scale = std::max(1.0, std::abs(n.joints[k].x) + std::abs(n.joints[k].y));
      for (const NormalizedFrame* other : {&nm, &ns}) {
        invariance_err = std::max({invariance_err, std::abs(other->joints[k].x - n.joints[k].x) / scale,
                                   std::abs(other->joints[k].y - n.joints[k].y) / scale});
      }
    }
  }
  return {anchor_err <= 1e-9 && extent_err <= 1e-9 && invariance_err <= 1e-9,
          fmt("1000 frames, anchor %.3g, extent %.3g, invariance (relative) %.3g", anchor_err, extent_err,
              invariance_err)};
}

Outcome hand_golden() {
  const Topology& topo = testing::four_joint_topology();
  const NormalizedFrame n = normalize_frame(testing::four_joint_frame(), topo, 64, 128);
  double coord_err = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    coord_err = std::max({coord_err, std::abs(n.joints[k].x - testing::kFourJointExpected[k][0]),
                          std::abs(n.joints[k].y - testing::kFourJointExpected[k][1])});
  }
  const SkeletonMap map = render_skeleton_map(n, topo, {8.0, kDefaultTruncation});
  const TensorFile golden = read_tensor_file(std::string(GAITMAP_TEST_DATA_DIR) + "/four_joint_sigma8.gmap");
  const bool shape_ok = golden.dims == std::array<std::uint32_t, 4>{1, 2, 128, 128};
  std::size_t mismatched = 0;
  if (shape_ok) {
    for (std::size_t i = 0; i < map.data.size(); ++i)
      mismatched += std::bit_cast<std::uint32_t>(map.data[i]) != std::bit_cast<std::uint32_t>(golden.data[i]);
  }
  // The committed file also agrees with the reference renderer.
  const SkeletonMap ref = render_skeleton_map_bruteforce(n, topo, {8.0, kDefaultTruncation});
  float ref_err = 0.0f;
  if (shape_ok)
    for (std::size_t i = 0; i < ref.data.size(); ++i) ref_err = std::max(ref_err, std::abs(ref.data[i] - golden.data[i]));
  return {coord_err <= 1e-9 && shape_ok && mismatched == 0 && ref_err <= 1e-6f,
          fmt("coordinate error %.3g, %zu differing pixels, reference error %.3g", coord_err, mismatched,
              static_cast<double>(ref_err))};
}

Outcome framing_contract() {
  std::mt19937_64 rng(1004);
  int renderable = 0, bad_shape = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const NormalizedFrame f = testing::random_normalized_frame(rng);
    const SkeletonMap map = render_skeleton_map(f, coco17_topology(), {});
    try {
      const SkeletonMap cut = double_side_cut(resize_bilinear(subject_centered_crop(map, 64), 64, 64));
      ++renderable;
      bad_shape += cut.height != 64 || cut.width != 44 || cut.data.size() != 2u * 64 * 44;
    } catch (const EmptyMap&) {
    }
  }

  SkeletonMap band(128, 128, 8.0);
  for (int r = 10; r <= 50; ++r) band.at(0, r, 64) = 1.0f;
  const bool crop_ok = subject_crop_rect(band, 64) == CropRect{10, 51, 32, 96};

  SkeletonMap checker(2, 2, 8.0);
  checker.at(0, 0, 1) = checker.at(0, 1, 0) = 1.0f;
  const bool resize_ok = resize_bilinear(checker, 3, 3).at(0, 1, 1) == 0.5f;

  SkeletonMap marker(64, 64, 8.0);
  marker.at(1, 20, 10) = 7.0f;
  const SkeletonMap cut = double_side_cut(marker);
  const bool cut_ok = cut.at(1, 20, 0) == 7.0f &&
                      std::count(cut.data.begin(), cut.data.end(), 7.0f) == 1;

  return {renderable >= 100 && bad_shape == 0 && crop_ok && resize_ok && cut_ok,
          fmt("%d renderable frames, %d wrong shapes; crop %s, resize %s, cut %s", renderable, bad_shape,
              crop_ok ? "ok" : "wrong", resize_ok ? "ok" : "wrong", cut_ok ? "ok" : "wrong")};
}

Outcome fusion_properties() {
  using namespace nn;
  std::mt19937_64 rng(1005);
  double sum_err = 0;
  std::size_t outside = 0, nonpositive = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t c = 4 * (1 + trial % 4);
    AttentionNet net = AttentionNet::create(c);
    net.randomize(rng, -0.1 * (1 + trial % 10), 0.1 * (1 + trial % 10));
    const Tensor a = Tensor::uniform({c, 6, 5}, rng, -3, 3), b = Tensor::uniform({c, 6, 5}, rng, -3, 3);
    const AttentionWeights w = attention_weights(a, b, net);
    const Tensor out = fuse_attention(a, b, net);
    for (std::size_t i = 0; i < a.size(); ++i) {
      sum_err = std::max(sum_err, std::abs(w.a[i] + w.b[i] - 1.0));
      nonpositive += !(w.a[i] > 0.0) || !(w.b[i] > 0.0);
      outside += out[i] < std::min(a[i], b[i]) || out[i] > std::max(a[i], b[i]);
    }
  }
  std::size_t not_average = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Tensor a = Tensor::uniform({16, 4, 4}, rng, -3, 3), b = Tensor::uniform({16, 4, 4}, rng, -3, 3);
    const Tensor out = fuse_attention(a, b, AttentionNet::create(16));
    for (std::size_t i = 0; i < a.size(); ++i) not_average += out[i] != (a[i] + b[i]) / 2;
  }
  return {sum_err <= 1e-12 && outside == 0 && nonpositive == 0 && not_average == 0,
          fmt("100 cases, weight-sum error %.3g, %zu outside [min, max], %zu non-positive weights, "
              "%zu zero-net mismatches",
              sum_err, outside, nonpositive, not_average)};
}

Outcome gradient_checks() {
  using namespace nn;
  const auto start = Clock::now();
  std::mt19937_64 rng(1006);
  double worst[4] = {0, 0, 0, 0};
  std::size_t checked[4] = {0, 0, 0, 0};
  std::size_t kinks = 0;
  std::size_t tiny = 0;
  double noise = 0.0;
  bool all_passed = true;
  auto record = [&](int k, const GradCheckReport& r) {
    worst[k] = std::max(worst[k], std::isnan(r.max_rel_error) ? INFINITY : r.max_rel_error);
    checked[k] += r.checked;
    kinks += r.kinks;
    tiny += r.below_resolution;
    noise = std::max(noise, r.max_noise_ratio);
    all_passed = all_passed && r.passed;
  };
  const ToyConfig small{4, 8, 4};
  const FusionMode modes[] = {FusionMode::kAdd, FusionMode::kConcatenate, FusionMode::kAttention};
  const FusionLevel levels[] = {FusionLevel::kLowLevel, FusionLevel::kHighLevel};
  for (int draw = 0; draw < 12; ++draw) {
    ConvLayer conv = ConvLayer::create(4, 3, 3, 1 + draw % 2, 1);
    conv.randomize(rng);
    record(0, grad_check_conv2d(conv, Tensor::uniform({3, 8, 7}, rng, -1, 1)));

    const Tensor a = Tensor::uniform({8, 5, 4}, rng, -1, 1), b = Tensor::uniform({8, 5, 4}, rng, -1, 1);
    ConvLayer proj = ConvLayer::create(8, 16, 1);
    proj.randomize(rng);
    record(1, grad_check_fuse_concat(a, b, proj));
    AttentionNet net = AttentionNet::create(8);
    net.randomize(rng);
    record(2, grad_check_fuse_attention(a, b, net));

    const FusionLevel level = levels[draw % 2];
    const FusionConfig cfg{modes[(draw / 2) % 3], level, fusion_channels(level, small)};
    const ToyParams params = ToyParams::random(cfg, rng(), small);
    record(3, grad_check_toy(Tensor::uniform({1, 16, 12}, rng, 0, 1), Tensor::uniform({2, 16, 12}, rng, 0, 1),
                             params));
  }
  const double t = seconds_since(start);
  const bool ok = std::all_of(std::begin(worst), std::end(worst), [](double w) { return w <= 1e-3; });
  const std::size_t total = checked[0] + checked[1] + checked[2] + checked[3];
  return {ok && all_passed && t <= 120.0,
          fmt("12 draws each; max relative error conv2d %.2g, concat %.2g, attention %.2g, toy %.2g "
              "(%zu values, %zu across ReLU kinks, %zu below rounding with noise ratio %.2g); %.1f s",
              worst[0], worst[1], worst[2], worst[3], total, kinks, tiny, noise, t)};
}

Outcome determinism() {
  testing::TempDir dir("acceptance_determinism");
  const std::string manifest = write_synthetic_dataset(dir.str(), 10, 1007);
  std::map<std::string, std::string> reference;
  std::size_t differing_runs = 0, failures = 0, files = 0;
  for (int threads : {1, 2, 8}) {
    PipelineConfig cfg;
    cfg.manifest_path = manifest;
    cfg.output_dir = (dir.path() / ("out_t" + std::to_string(threads))).string();
    cfg.threads = threads;
    cfg.png_export = true;
    cfg.segment_seed = 77;
    failures += run_pipeline(cfg).failure_count();
    const auto snap = testing::snapshot(cfg.output_dir);
    if (reference.empty()) {
      reference = snap;
      files = snap.size();
    } else {
      differing_runs += snap != reference;
    }
  }
  return {differing_runs == 0 && failures == 0 && files == 1 + 10 + 10 * 30,
          fmt("10 sequences, %zu files per run, %zu failures, %zu runs differing from threads=1", files,
              failures, differing_runs)};
}

Outcome triplet_examples() {
  using namespace nn;
  const Tensor a({4}, {1.0, 2.0, -1.0, 0.5});
  const Tensor one_away({4}, {1.0, 2.0, -1.0, 1.5});
  const Tensor two_away({4}, {1.0, 0.0, -1.0, 0.5});
  const double l1 = triplet_loss(a, a, a, 0.2);
  const double l2 = triplet_loss(a, one_away, two_away, 0.2);
  const double l3 = triplet_loss(a, two_away, one_away, 0.2);
  return {l1 == 0.2 && l2 == 0.0 && l3 == 1.2, fmt("losses %.17g, %.17g, %.17g", l1, l2, l3)};
}

Outcome format_round_trip() {
  std::mt19937_64 rng(1009);
  std::uniform_int_distribution<std::uint32_t> dim(1, 8), bits;
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    TensorFile t;
    t.dims = {dim(rng), 2, dim(rng), dim(rng)};
    t.data.resize(t.element_count());
    for (auto& v : t.data) v = std::bit_cast<float>(bits(rng));
    const auto bytes = encode_tensor(t);
    const TensorFile back = decode_tensor(bytes);
    mismatches += back.dims != t.dims ||
                  !std::equal(t.data.begin(), t.data.end(), back.data.begin(), [](float x, float y) {
                    return std::bit_cast<std::uint32_t>(x) == std::bit_cast<std::uint32_t>(y);
                  });
  }

  TensorFile base;
  base.dims = {2, 2, 3, 3};
  base.data.assign(base.element_count(), 0.5f);
  const auto good = encode_tensor(base);
  auto offset_of = [](std::vector<std::uint8_t> bytes) -> long {
    try {
      decode_tensor(bytes);
    } catch (const FormatError& e) {
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  auto magic = good;
  magic[0] = magic[1] = magic[2] = magic[3] = 'X';
  auto version = good;
  version[4] = 9;
  auto channels = good;
  channels[12] = 3;
  const std::vector<std::uint8_t> short_header(good.begin(), good.begin() + 10);
  const std::vector<std::uint8_t> short_payload(good.begin(), good.end() - 5);
  const bool corrupt_ok = offset_of(magic) == 0 && offset_of(version) == 4 && offset_of(channels) == 12 &&
                          offset_of(short_header) == 10 &&
                          offset_of(short_payload) == static_cast<long>(good.size() - 5);
  return {mismatches == 0 && corrupt_ok,
          fmt("1000 tensors, %zu mismatches; corrupted headers %s", mismatches,
              corrupt_ok ? "rejected at the expected offsets" : "NOT rejected as expected")};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"rendering oracle equivalence", rendering_oracle},
      {"normalization invariants", normalization_invariants},
      {"hand-derived golden", hand_golden},
      {"framing contract", framing_contract},
      {"fusion properties", fusion_properties},
      {"gradient checks", gradient_checks},
      {"determinism across thread counts", determinism},
      {"triplet loss examples", triplet_examples},
      {"tensor format round trip", format_round_trip},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.passed;
    std::printf("[%s] %d. %s: %s\n", o.passed ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed ? 1 : 0;
}
