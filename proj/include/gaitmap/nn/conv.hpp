// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "gaitmap/nn/tensor.hpp"

namespace gaitmap::nn {

/// 2D cross-correlation layer with zero padding. Gradients of a layer are
/// stored in a ConvLayer of the same shape.
struct ConvLayer {
  Tensor kernel;  // (out_ch, in_ch, kh, kw), kh and kw odd
  Tensor bias;    // (out_ch)
  std::size_t stride = 1;
  std::size_t padding = 0;

  /// Zero weights. Throws ShapeError for even kernels or stride 0.
  static ConvLayer create(std::size_t out_ch, std::size_t in_ch, std::size_t k,
                          std::size_t stride = 1, std::size_t padding = 0);
  static ConvLayer zeros_like(const ConvLayer& other);

  std::size_t out_channels() const { return kernel.dim(0); }
  std::size_t in_channels() const { return kernel.dim(1); }
  std::size_t kernel_h() const { return kernel.dim(2); }
  std::size_t kernel_w() const { return kernel.dim(3); }

  /// Throws ShapeError if the invariants do not hold.
  void validate() const;

  /// Fills kernel and bias from U[lo, hi].
  void randomize(std::mt19937_64& rng, double lo = -0.1, double hi = 0.1);

  std::vector<Tensor*> parameters() { return {&kernel, &bias}; }
};

/// (C_in, H, W) -> (C_out, (H + 2p - kh) / s + 1, (W + 2p - kw) / s + 1).
Tensor conv2d(const Tensor& input, const ConvLayer& layer);

/// Accumulates dL/dkernel and dL/dbias into `grad` and returns dL/dinput.
Tensor conv2d_backward(const Tensor& input, const ConvLayer& layer, const Tensor& grad_out,
                       ConvLayer& grad);

}  // namespace gaitmap::nn
