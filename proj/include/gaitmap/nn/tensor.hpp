// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace gaitmap::nn {

using Shape = std::vector<std::size_t>;

std::string shape_string(const Shape& shape);

/// Dense row-major float64 array.
class Tensor {
 public:
  Tensor() = default;
  /// Zero-filled. Throws ShapeError on an empty shape or a zero extent.
  explicit Tensor(Shape shape);
  /// Throws ShapeError if `data.size()` is not the product of `shape`.
  Tensor(Shape shape, std::vector<double> data);

  static Tensor zeros_like(const Tensor& other) { return Tensor(other.shape_); }
  /// Seeded uniform values in [lo, hi].
  static Tensor uniform(Shape shape, std::mt19937_64& rng, double lo = -0.1, double hi = 0.1);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  /// Element (c, y, x) of a rank-3 tensor.
  double& at(std::size_t c, std::size_t y, std::size_t x) {
    return data_[(c * shape_[1] + y) * shape_[2] + x];
  }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return data_[(c * shape_[1] + y) * shape_[2] + x];
  }

  double sum() const;
  Tensor& operator+=(const Tensor& other);

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// Throws ShapeError naming `what` when the shapes differ.
void require_same_shape(const Tensor& a, const Tensor& b, const char* what);

/// (C1, H, W) ++ (C2, H, W) -> (C1 + C2, H, W).
Tensor concat_channels(const Tensor& a, const Tensor& b);

/// Channels [begin, begin + count) of a rank-3 tensor.
Tensor slice_channels(const Tensor& t, std::size_t begin, std::size_t count);

Tensor relu(const Tensor& x);
/// Gradient of relu at pre-activation `x` (zero at x <= 0).
Tensor relu_backward(const Tensor& x, const Tensor& grad_out);

/// Mean over the spatial axes of a (C, H, W) tensor -> (C).
Tensor global_average(const Tensor& x);
Tensor global_average_backward(const Shape& input_shape, const Tensor& grad_out);

/// Element-wise maximum over frames (set pooling); all frames share a shape.
Tensor set_max_pool(std::span<const Tensor> frames);

}  // namespace gaitmap::nn
