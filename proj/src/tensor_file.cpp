// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/tensor_file.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <limits>

#include "gaitmap/errors.hpp"

namespace gaitmap {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(bytes[at + k]) << (8 * k);
  return v;
}

void require(std::span<const std::uint8_t> bytes, std::size_t at, std::size_t n, const char* what) {
  if (bytes.size() < at + n)
    throw FormatError(bytes.size(), std::string("truncated ") + what + " (file ends early)");
}

}  // namespace

std::size_t TensorFile::element_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::vector<std::uint8_t> encode_tensor(const TensorFile& tensor, ChannelRule rule) {
  for (auto d : tensor.dims)
    if (d == 0) throw ShapeError("tensor dims must be positive");
  if (rule == ChannelRule::kSkeletonMap && tensor.dims[1] != 2)
    throw ShapeError("skeleton map tensors must have 2 channels");
  if (tensor.data.size() != tensor.element_count())
    throw ShapeError("payload length does not match dims");

  std::vector<std::uint8_t> out;
  out.reserve(kTensorHeaderBytes + 4 * tensor.data.size());
  out.insert(out.end(), kTensorMagic.begin(), kTensorMagic.end());
  put_u32(out, kTensorVersion);
  for (auto d : tensor.dims) put_u32(out, d);
  for (float v : tensor.data) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

TensorFile decode_tensor_record(std::span<const std::uint8_t> bytes, std::size_t& offset,
                                ChannelRule rule) {
  const std::size_t base = offset;
  require(bytes, base, 4, "magic");
  for (std::size_t k = 0; k < 4; ++k) {
    if (bytes[base + k] != static_cast<std::uint8_t>(kTensorMagic[k]))
      throw FormatError(base, "bad magic (expected \"GMAP\")");
  }
  require(bytes, base + 4, 4, "version");
  const std::uint32_t version = get_u32(bytes, base + 4);
  if (version != kTensorVersion)
    throw FormatError(base + 4, "unsupported version " + std::to_string(version));

  TensorFile tensor;
  require(bytes, base + 8, 16, "dims");
  std::size_t count = 1;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t at = base + 8 + 4 * k;
    tensor.dims[k] = get_u32(bytes, at);
    if (tensor.dims[k] == 0) throw FormatError(at, "zero dimension");
    if (count > std::numeric_limits<std::size_t>::max() / 4 / tensor.dims[k])
      throw FormatError(at, "dimension product overflows");
    count *= tensor.dims[k];
  }
  if (rule == ChannelRule::kSkeletonMap && tensor.dims[1] != 2)
    throw FormatError(base + 12, "expected 2 channels, got " + std::to_string(tensor.dims[1]));

  const std::size_t payload = base + kTensorHeaderBytes;
  if (bytes.size() - payload < 4 * count) {
    throw FormatError(bytes.size(), "truncated payload: expected " + std::to_string(4 * count) +
                                        " bytes from offset " + std::to_string(payload));
  }
  tensor.data.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    tensor.data[i] = std::bit_cast<float>(get_u32(bytes, payload + 4 * i));
  offset = payload + 4 * count;
  return tensor;
}

TensorFile decode_tensor(std::span<const std::uint8_t> bytes, ChannelRule rule) {
  std::size_t offset = 0;
  TensorFile tensor = decode_tensor_record(bytes, offset, rule);
  if (offset != bytes.size()) throw FormatError(offset, "trailing bytes after payload");
  return tensor;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("read failure on " + path);
  return bytes;
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failure on " + path);
}

void write_tensor_file(const std::string& path, const TensorFile& tensor, ChannelRule rule) {
  write_file_bytes(path, encode_tensor(tensor, rule));
}

TensorFile read_tensor_file(const std::string& path, ChannelRule rule) {
  return decode_tensor(read_file_bytes(path), rule);
}

}  // namespace gaitmap
