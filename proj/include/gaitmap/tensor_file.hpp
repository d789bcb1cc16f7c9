// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// GMAP binary tensor container. All integers are little-endian u32.
//
//   offset  size  field
//   0       4     magic "GMAP"
//   4       4     version (1)
//   8       16    dims T, C, H, W
//   24      4*N   float32 payload, row-major T -> C -> H -> W, N = T*C*H*W

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gaitmap {

inline constexpr std::array<char, 4> kTensorMagic = {'G', 'M', 'A', 'P'};
inline constexpr std::uint32_t kTensorVersion = 1;
inline constexpr std::size_t kTensorHeaderBytes = 24;

enum class ChannelRule {
  kSkeletonMap,  // C must be 2
  kAny,          // generic 4-D record (parameter sets)
};

struct TensorFile {
  std::array<std::uint32_t, 4> dims{};  // T, C, H, W
  std::vector<float> data;

  std::size_t element_count() const;
  friend bool operator==(const TensorFile&, const TensorFile&) = default;
};

/// Throws ShapeError if the payload length does not match the dims, a dim is
/// zero, or the channel rule is violated.
std::vector<std::uint8_t> encode_tensor(const TensorFile& tensor,
                                        ChannelRule rule = ChannelRule::kSkeletonMap);

/// Decodes one record starting at `offset` and advances `offset` past it.
/// Throws FormatError carrying the byte offset of the first bad field.
TensorFile decode_tensor_record(std::span<const std::uint8_t> bytes, std::size_t& offset,
                                ChannelRule rule = ChannelRule::kSkeletonMap);

/// Decodes a buffer holding exactly one record; trailing bytes are an error.
TensorFile decode_tensor(std::span<const std::uint8_t> bytes,
                         ChannelRule rule = ChannelRule::kSkeletonMap);

void write_tensor_file(const std::string& path, const TensorFile& tensor,
                       ChannelRule rule = ChannelRule::kSkeletonMap);
TensorFile read_tensor_file(const std::string& path, ChannelRule rule = ChannelRule::kSkeletonMap);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace gaitmap
