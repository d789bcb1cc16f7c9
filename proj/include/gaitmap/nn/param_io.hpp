// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Parameter sets as a run of GMAP records, one per tensor, in traversal
// order. Shapes are left-padded with 1s to four dims; values are stored as
// float32 and widened to float64 on load.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaitmap/nn/tensor.hpp"

namespace gaitmap::nn {

/// Throws ShapeError for tensors of rank > 4.
std::vector<std::uint8_t> encode_parameters(const std::vector<const Tensor*>& params);

/// Fills `params` (whose shapes must match the stored records) from `bytes`.
/// Throws FormatError on corrupt data and ShapeError on a count or shape mismatch.
void decode_parameters(const std::vector<std::uint8_t>& bytes, const std::vector<Tensor*>& params);

void save_parameters(const std::string& path, const std::vector<const Tensor*>& params);
void load_parameters(const std::string& path, const std::vector<Tensor*>& params);

}  // namespace gaitmap::nn
