// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/nn/tensor.hpp"

#include <algorithm>
#include <numeric>

#include "gaitmap/errors.hpp"

namespace gaitmap::nn {

namespace {

std::size_t element_count(const Shape& shape) {
  if (shape.empty()) throw ShapeError("tensor shape must be non-empty");
  std::size_t n = 1;
  for (auto d : shape) {
    if (d == 0) throw ShapeError("tensor extents must be positive: " + shape_string(shape));
    n *= d;
  }
  return n;
}

void require_rank3(const Tensor& t, const char* what) {
  if (t.rank() != 3) throw ShapeError(std::string(what) + ": expected (C, H, W), got " +
                                      shape_string(t.shape()));
}

}  // namespace

std::string shape_string(const Shape& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)), data_(element_count(shape_), 0.0) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != element_count(shape_))
    throw ShapeError("data length does not match shape " + shape_string(shape_));
}

Tensor Tensor::uniform(Shape shape, std::mt19937_64& rng, double lo, double hi) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> dist(lo, hi);
  for (auto& v : t.data_) v = dist(rng);
  return t;
}

double Tensor::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

Tensor& Tensor::operator+=(const Tensor& other) {
  require_same_shape(*this, other, "tensor +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(what) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                     shape_string(b.shape()));
  }
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  require_rank3(a, "concat");
  require_rank3(b, "concat");
  if (a.dim(1) != b.dim(1) || a.dim(2) != b.dim(2))
    throw ShapeError("concat: spatial mismatch " + shape_string(a.shape()) + " vs " +
                     shape_string(b.shape()));
  Tensor out({a.dim(0) + b.dim(0), a.dim(1), a.dim(2)});
  std::copy(a.values().begin(), a.values().end(), out.values().begin());
  std::copy(b.values().begin(), b.values().end(), out.values().begin() + static_cast<std::ptrdiff_t>(a.size()));
  return out;
}

Tensor slice_channels(const Tensor& t, std::size_t begin, std::size_t count) {
  require_rank3(t, "slice");
  if (count == 0 || begin + count > t.dim(0)) throw ShapeError("slice: channel range out of bounds");
  const std::size_t plane = t.dim(1) * t.dim(2);
  Tensor out({count, t.dim(1), t.dim(2)});
  const auto first = t.values().begin() + static_cast<std::ptrdiff_t>(begin * plane);
  std::copy(first, first + static_cast<std::ptrdiff_t>(count * plane), out.values().begin());
  return out;
}

Tensor relu(const Tensor& x) {
  Tensor out = x;
  for (auto& v : out.values()) v = std::max(v, 0.0);
  return out;
}

Tensor relu_backward(const Tensor& x, const Tensor& grad_out) {
  require_same_shape(x, grad_out, "relu_backward");
  Tensor g = grad_out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(x[i] > 0.0)) g[i] = 0.0;
  return g;
}

Tensor global_average(const Tensor& x) {
  require_rank3(x, "global_average");
  const std::size_t plane = x.dim(1) * x.dim(2);
  Tensor out({x.dim(0)});
  for (std::size_t c = 0; c < x.dim(0); ++c) {
    const auto first = x.values().begin() + static_cast<std::ptrdiff_t>(c * plane);
    out[c] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(plane), 0.0) /
             static_cast<double>(plane);
  }
  return out;
}

Tensor global_average_backward(const Shape& input_shape, const Tensor& grad_out) {
  Tensor g(input_shape);
  const std::size_t plane = input_shape.at(1) * input_shape.at(2);
  if (grad_out.rank() != 1 || grad_out.dim(0) != input_shape[0])
    throw ShapeError("global_average_backward: gradient shape mismatch");
  for (std::size_t c = 0; c < input_shape[0]; ++c) {
    const double v = grad_out[c] / static_cast<double>(plane);
    for (std::size_t p = 0; p < plane; ++p) g[c * plane + p] = v;
  }
  return g;
}

Tensor set_max_pool(std::span<const Tensor> frames) {
  if (frames.empty()) throw ShapeError("set_max_pool: no frames");
  Tensor out = frames.front();
  for (const auto& f : frames.subspan(1)) {
    require_same_shape(out, f, "set_max_pool");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], f[i]);
  }
  return out;
}

}  // namespace gaitmap::nn
