// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Regenerates tests/data/four_joint_sigma8.gmap: the raw 128 x 128 skeleton
// map of the 4-joint example frame at sigma 8.

#include <cstdio>
#include <exception>

#include "../tests/support/example_frame.hpp"
#include "gaitmap/normalization.hpp"
#include "gaitmap/renderer.hpp"
#include "gaitmap/tensor_file.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <output.gmap>\n", argv[0]);
    return 2;
  }
  try {
    using namespace gaitmap;
    const Topology& topo = testing::four_joint_topology();
    const NormalizedFrame frame = normalize_frame(testing::four_joint_frame(), topo, 64, 128);
    const SkeletonMap map = render_skeleton_map(frame, topo, {8.0, kDefaultTruncation});
    TensorFile t;
    t.dims = {1, 2, static_cast<std::uint32_t>(map.height), static_cast<std::uint32_t>(map.width)};
    t.data = map.data;
    write_tensor_file(argv[1], t);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
