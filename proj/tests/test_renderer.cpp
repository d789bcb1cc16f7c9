// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "gaitmap/errors.hpp"
#include "gaitmap/renderer.hpp"
#include "support/example_frame.hpp"
#include "support/random_frames.hpp"

using namespace gaitmap;

namespace {

const Topology& pair_topology() {
  static const Topology topo(2, {{0, 1}}, 0, 1);
  return topo;
}

NormalizedFrame make_frame(std::vector<Keypoint> joints, int canvas = 128) {
  NormalizedFrame f;
  f.joints = std::move(joints);
  f.canvas = canvas;
  f.body_height = canvas / 2;
  return f;
}

float max_abs_diff(const SkeletonMap& a, const SkeletonMap& b) {
  float worst = 0.0f;
  for (std::size_t i = 0; i < a.data.size(); ++i) worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
  return worst;
}

// Row-major [row][col] access on a single R x R channel.
float px(const std::vector<float>& plane, int canvas, int i, int j) { return plane[static_cast<std::size_t>(j) * canvas + i]; }

}  // namespace

TEST_CASE("joint map: single joint values") {
  const NormalizedFrame f = make_frame({{64, 64, 0.5}});
  const std::vector<float> j = render_joint_map(f, {});
  CHECK(px(j, 128, 64, 64) == 0.5f);
  // 0.5 * exp(-64 / 128)
  CHECK(std::abs(px(j, 128, 64, 72) - 0.3032653298563167) <= 1e-7);
  CHECK(px(j, 128, 72, 64) == px(j, 128, 64, 72));
}

TEST_CASE("joint map: coincident joints add") {
  const NormalizedFrame f = make_frame({{10, 10, 0.6}, {10, 10, 0.7}});
  const std::vector<float> j = render_joint_map(f, {});
  CHECK(std::abs(px(j, 128, 10, 10) - 1.3) <= 1e-7);
}

TEST_CASE("limb map: perpendicular and endpoint distance") {
  const NormalizedFrame f = make_frame({{0, 0, 1}, {10, 0, 1}});
  const std::vector<float> l = render_limb_map(f, pair_topology(), {});
  // D = 5 in both cases: exp(-25 / 128).
  CHECK(std::abs(px(l, 128, 5, 5) - 0.8225775623986646) <= 1e-7);
  CHECK(std::abs(px(l, 128, 15, 0) - 0.8225775623986646) <= 1e-7);
  CHECK(px(l, 128, 5, 0) == 1.0f);
}

TEST_CASE("limb map: zero endpoint confidence contributes nothing") {
  const NormalizedFrame f = make_frame({{0, 0, 1}, {10, 0, 0}});
  const std::vector<float> l = render_limb_map(f, pair_topology(), {});
  CHECK(std::all_of(l.begin(), l.end(), [](float v) { return v == 0.0f; }));
}

TEST_CASE("point to segment distance") {
  CHECK(point_segment_distance_sq(5, 5, 0, 0, 10, 0) == 25.0);
  CHECK(point_segment_distance_sq(15, 0, 0, 0, 10, 0) == 25.0);
  CHECK(point_segment_distance_sq(-3, 4, 0, 0, 10, 0) == 25.0);
  CHECK(point_segment_distance_sq(3, 4, 1, 1, 1, 1) == 13.0);  // zero-length segment
}

TEST_CASE("skeleton map: zero-confidence frame renders all zeros") {
  NormalizedFrame f = make_frame(std::vector<Keypoint>(17, {50, 60, 0.0}));
  const SkeletonMap m = render_skeleton_map(f, coco17_topology(), {});
  CHECK(m.height == 128);
  CHECK(std::all_of(m.data.begin(), m.data.end(), [](float v) { return v == 0.0f; }));
  const SkeletonMap b = render_skeleton_map_bruteforce(f, coco17_topology(), {});
  CHECK(std::all_of(b.data.begin(), b.data.end(), [](float v) { return v == 0.0f; }));
}

TEST_CASE("skeleton map: channel order") {
  const NormalizedFrame f = make_frame({{30, 40, 1}, {90, 40, 0}});
  const SkeletonMap m = render_skeleton_map(f, pair_topology(), {});
  CHECK(m.at(0, 40, 30) == 1.0f);
  CHECK(m.at(1, 40, 30) == 0.0f);
}

TEST_CASE("skeleton map: example frame matches the reference renderer") {
  const NormalizedFrame f = normalize_frame(gaitmap::testing::four_joint_frame(),
                                            gaitmap::testing::four_joint_topology(), 64, 128);
  const auto& topo = gaitmap::testing::four_joint_topology();
  CHECK(max_abs_diff(render_skeleton_map(f, topo, {}), render_skeleton_map_bruteforce(f, topo, {})) <= 1e-6f);
}

TEST_CASE("reference renderer reproduces the hand values") {
  const SkeletonMap j = render_skeleton_map_bruteforce(make_frame({{64, 64, 0.5}, {64, 64, 0}}), pair_topology(), {});
  CHECK(j.at(0, 64, 64) == 0.5f);
  CHECK(std::abs(j.at(0, 72, 64) - 0.3032653298563167) <= 1e-7);
  const SkeletonMap l = render_skeleton_map_bruteforce(make_frame({{0, 0, 1}, {10, 0, 1}}), pair_topology(), {});
  CHECK(std::abs(l.at(1, 5, 5) - 0.8225775623986646) <= 1e-7);
  CHECK(std::abs(l.at(1, 0, 15) - 0.8225775623986646) <= 1e-7);
}

TEST_CASE("fast path matches the reference on random frames") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const NormalizedFrame f = gaitmap::testing::random_normalized_frame(rng);
    const RenderOptions opts{8.0, kDefaultTruncation};
    CHECK(max_abs_diff(render_skeleton_map(f, coco17_topology(), opts),
                       render_skeleton_map_bruteforce(f, coco17_topology(), opts)) <= 1e-6f);
  }
}

TEST_CASE("values are non-negative and bounded by total confidence") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const NormalizedFrame f = gaitmap::testing::random_normalized_frame(rng);
    const SkeletonMap m = render_skeleton_map(f, coco17_topology(), {});
    double joint_bound = 0, limb_bound = 0;
    for (const auto& kp : f.joints) joint_bound += kp.c;
    for (const auto& l : coco17_topology().limbs())
      limb_bound += std::min(f.joints[l.from].c, f.joints[l.to].c);
    const std::size_t plane = 128 * 128;
    for (std::size_t i = 0; i < plane; ++i) {
      CHECK(m.data[i] >= 0.0f);
      CHECK(m.data[i] <= joint_bound * (1 + 1e-6));
      CHECK(m.data[plane + i] >= 0.0f);
      CHECK(m.data[plane + i] <= limb_bound * (1 + 1e-6));
    }
  }
}

TEST_CASE("joint channel is additive over joint sets") {
  std::mt19937_64 rng(11);
  const NormalizedFrame f = gaitmap::testing::random_normalized_frame(rng);
  NormalizedFrame first = f, second = f;
  for (std::size_t k = 0; k < 17; ++k) (k % 2 ? first : second).joints[k].c = 0.0;
  const std::vector<float> all = render_joint_map(f, {});
  const std::vector<float> a = render_joint_map(first, {});
  const std::vector<float> b = render_joint_map(second, {});
  // Each map is rounded to float once, so the sum may differ by rounding only.
  for (std::size_t i = 0; i < all.size(); ++i)
    CHECK(std::abs(all[i] - (a[i] + b[i])) <= 2e-7f * std::max(1.0f, all[i]));
}

TEST_CASE("mirroring the joints mirrors the map") {
  // Integer and half-integer coordinates mirror exactly about x = (R - 1) / 2.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coord(0, 254);
  std::uniform_real_distribution<double> conf(0.1, 1.0);
  const int r = 128;
  NormalizedFrame f = make_frame({}, r);
  for (int k = 0; k < 17; ++k) f.joints.push_back({coord(rng) / 2.0, coord(rng) / 2.0, conf(rng)});
  NormalizedFrame mirrored = f;
  for (auto& kp : mirrored.joints) kp.x = (r - 1) - kp.x;
  const SkeletonMap m = render_skeleton_map(f, coco17_topology(), {});
  const SkeletonMap mm = render_skeleton_map(mirrored, coco17_topology(), {});
  for (int ch = 0; ch < 2; ++ch)
    for (int row = 0; row < r; ++row)
      for (int col = 0; col < r; ++col)
        CHECK(std::abs(m.at(ch, row, col) - mm.at(ch, row, r - 1 - col)) <= 1e-9);
}

TEST_CASE("off-centre values grow with sigma") {
  const NormalizedFrame f = make_frame({{64, 64, 1.0}});
  std::vector<float> prev;
  for (double sigma : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    const std::vector<float> j = render_joint_map(f, {sigma, kDefaultTruncation});
    if (!prev.empty())
      for (std::size_t i = 0; i < j.size(); ++i) CHECK(j[i] >= prev[i]);
    prev = j;
  }
}

TEST_CASE("rendering is bit-identical across runs") {
  std::mt19937_64 rng(99);
  const NormalizedFrame f = gaitmap::testing::random_normalized_frame(rng);
  const SkeletonMap a = render_skeleton_map(f, coco17_topology(), {});
  const SkeletonMap b = render_skeleton_map(f, coco17_topology(), {});
  CHECK(std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(float)) == 0);
}

TEST_CASE("joints off the canvas still contribute their tails") {
  const NormalizedFrame f = make_frame({{-4, 64, 1.0}, {200, 64, 1.0}});
  const SkeletonMap m = render_skeleton_map(f, pair_topology(), {});
  CHECK(m.at(0, 64, 0) == doctest::Approx(std::exp(-16.0 / 128.0)).epsilon(1e-6));
  CHECK(m.at(1, 64, 60) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("render options are validated") {
  const NormalizedFrame f = make_frame({{1, 1, 1}, {2, 2, 1}});
  CHECK_THROWS_AS(render_skeleton_map(f, pair_topology(), {0.0, 6.0}), ConfigError);
  CHECK_THROWS_AS(render_skeleton_map(f, pair_topology(), {8.0, 2.0}), ConfigError);
  CHECK_THROWS_AS(render_skeleton_map(f, coco17_topology(), {}), ValidationError);
}
