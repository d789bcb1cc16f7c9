// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/nn/param_io.hpp"

#include "gaitmap/errors.hpp"
#include "gaitmap/tensor_file.hpp"

namespace gaitmap::nn {

namespace {

std::array<std::uint32_t, 4> padded_dims(const Shape& shape) {
  if (shape.size() > 4) throw ShapeError("parameter tensors must have rank <= 4");
  std::array<std::uint32_t, 4> dims{1, 1, 1, 1};
  const std::size_t pad = 4 - shape.size();
  for (std::size_t i = 0; i < shape.size(); ++i) dims[pad + i] = static_cast<std::uint32_t>(shape[i]);
  return dims;
}

}  // namespace

std::vector<std::uint8_t> encode_parameters(const std::vector<const Tensor*>& params) {
  std::vector<std::uint8_t> out;
  for (const Tensor* t : params) {
    TensorFile record;
    record.dims = padded_dims(t->shape());
    record.data.reserve(t->size());
    for (double v : t->values()) record.data.push_back(static_cast<float>(v));
    const auto bytes = encode_tensor(record, ChannelRule::kAny);
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  return out;
}

void decode_parameters(const std::vector<std::uint8_t>& bytes, const std::vector<Tensor*>& params) {
  std::size_t offset = 0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (offset == bytes.size())
      throw ShapeError("parameter file holds " + std::to_string(k) + " tensors, expected " +
                       std::to_string(params.size()));
    const std::size_t at = offset;
    const TensorFile record = decode_tensor_record(bytes, offset, ChannelRule::kAny);
    if (record.dims != padded_dims(params[k]->shape()))
      throw ShapeError("parameter " + std::to_string(k) + " at offset " + std::to_string(at) +
                       " does not match shape " + shape_string(params[k]->shape()));
    for (std::size_t i = 0; i < record.data.size(); ++i) (*params[k])[i] = record.data[i];
  }
  if (offset != bytes.size()) throw FormatError(offset, "trailing data after last parameter");
}

void save_parameters(const std::string& path, const std::vector<const Tensor*>& params) {
  write_file_bytes(path, encode_parameters(params));
}

void load_parameters(const std::string& path, const std::vector<Tensor*>& params) {
  decode_parameters(read_file_bytes(path), params);
}

}  // namespace gaitmap::nn
