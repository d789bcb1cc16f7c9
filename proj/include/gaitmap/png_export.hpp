// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaitmap/renderer.hpp"

namespace gaitmap {

/// 8-bit RGB pixels, row-major, 3 bytes per pixel as (J, L, L). Each source
/// channel is min-max scaled to [0, 255] on its own; a constant channel maps to 0.
/// Display only.
std::vector<std::uint8_t> to_display_rgb(const SkeletonMap& map);

/// Writes `to_display_rgb(map)` as an RGB PNG. Throws IoError.
void export_png(const SkeletonMap& map, const std::string& path);

}  // namespace gaitmap
