// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/nn/conv.hpp"

#include <algorithm>
#include <numeric>

#include "gaitmap/errors.hpp"

namespace gaitmap::nn {

namespace {

struct Geometry {
  std::size_t in_h, in_w, out_h, out_w;
};

Geometry geometry(const Tensor& input, const ConvLayer& layer) {
  layer.validate();
  if (input.rank() != 3) throw ShapeError("conv2d: input must be (C, H, W), got " + shape_string(input.shape()));
  if (input.dim(0) != layer.in_channels()) {
    throw ShapeError("conv2d: input has " + std::to_string(input.dim(0)) + " channels, layer expects " +
                     std::to_string(layer.in_channels()));
  }
  const std::size_t h = input.dim(1);
  const std::size_t w = input.dim(2);
  const std::size_t p2 = 2 * layer.padding;
  if (h + p2 < layer.kernel_h() || w + p2 < layer.kernel_w())
    throw ShapeError("conv2d: kernel larger than padded input");
  return {h, w, (h + p2 - layer.kernel_h()) / layer.stride + 1,
          (w + p2 - layer.kernel_w()) / layer.stride + 1};
}

// Output positions [begin, end) whose tap at kernel offset k lands inside an
// input of length n (the rest read zero padding).
struct Span {
  std::size_t begin;
  std::size_t end;
};

Span valid_span(std::size_t k, std::size_t pad, std::size_t stride, std::size_t n, std::size_t out) {
  const std::size_t begin = k >= pad ? 0 : (pad - k + stride - 1) / stride;
  if (n + pad <= k) return {0, 0};
  const std::size_t end = std::min(out, (n - 1 + pad - k) / stride + 1);
  return {std::min(begin, end), end};
}

}  // namespace

ConvLayer ConvLayer::create(std::size_t out_ch, std::size_t in_ch, std::size_t k, std::size_t stride,
                            std::size_t padding) {
  ConvLayer layer{Tensor({out_ch, in_ch, k, k}), Tensor({out_ch}), stride, padding};
  layer.validate();
  return layer;
}

ConvLayer ConvLayer::zeros_like(const ConvLayer& other) {
  return {Tensor::zeros_like(other.kernel), Tensor::zeros_like(other.bias), other.stride,
          other.padding};
}

void ConvLayer::validate() const {
  if (kernel.rank() != 4) throw ShapeError("conv kernel must be (out, in, kh, kw)");
  if (kernel_h() % 2 == 0 || kernel_w() % 2 == 0) throw ShapeError("conv kernel sizes must be odd");
  if (bias.rank() != 1 || bias.dim(0) != out_channels()) throw ShapeError("conv bias must be (out)");
  if (stride < 1) throw ShapeError("conv stride must be >= 1");
}

void ConvLayer::randomize(std::mt19937_64& rng, double lo, double hi) {
  kernel = Tensor::uniform(kernel.shape(), rng, lo, hi);
  bias = Tensor::uniform(bias.shape(), rng, lo, hi);
}

Tensor conv2d(const Tensor& input, const ConvLayer& layer) {
  const Geometry g = geometry(input, layer);
  const std::size_t kh = layer.kernel_h();
  const std::size_t kw = layer.kernel_w();
  const std::size_t cin = layer.in_channels();
  const std::size_t s = layer.stride;
  Tensor out({layer.out_channels(), g.out_h, g.out_w});
  const double* in = input.values().data();
  for (std::size_t o = 0; o < layer.out_channels(); ++o) {
    double* plane = out.values().data() + o * g.out_h * g.out_w;
    std::fill(plane, plane + g.out_h * g.out_w, layer.bias[o]);
    for (std::size_t c = 0; c < cin; ++c) {
      for (std::size_t ky = 0; ky < kh; ++ky) {
        const Span ys = valid_span(ky, layer.padding, s, g.in_h, g.out_h);
        for (std::size_t kx = 0; kx < kw; ++kx) {
          const Span xs = valid_span(kx, layer.padding, s, g.in_w, g.out_w);
          const double w = layer.kernel[((o * cin + c) * kh + ky) * kw + kx];
          const std::size_t n = xs.end - xs.begin;
          for (std::size_t y = ys.begin; y < ys.end; ++y) {
            const double* src = in + (c * g.in_h + y * s + ky - layer.padding) * g.in_w +
                                (xs.begin * s + kx - layer.padding);
            double* dst = plane + y * g.out_w + xs.begin;
            if (s == 1) {
              for (std::size_t i = 0; i < n; ++i) dst[i] += w * src[i];
            } else {
              for (std::size_t i = 0; i < n; ++i) dst[i] += w * src[i * s];
            }
          }
        }
      }
    }
  }
  return out;
}

Tensor conv2d_backward(const Tensor& input, const ConvLayer& layer, const Tensor& grad_out,
                       ConvLayer& grad) {
  const Geometry g = geometry(input, layer);
  if (grad_out.shape() != Shape{layer.out_channels(), g.out_h, g.out_w})
    throw ShapeError("conv2d_backward: gradient shape " + shape_string(grad_out.shape()));
  require_same_shape(grad.kernel, layer.kernel, "conv2d_backward kernel grad");
  require_same_shape(grad.bias, layer.bias, "conv2d_backward bias grad");

  const std::size_t kh = layer.kernel_h();
  const std::size_t kw = layer.kernel_w();
  const std::size_t cin = layer.in_channels();
  const std::size_t s = layer.stride;
  Tensor grad_in = Tensor::zeros_like(input);
  const double* in = input.values().data();
  double* gin = grad_in.values().data();
  for (std::size_t o = 0; o < layer.out_channels(); ++o) {
    const double* go = grad_out.values().data() + o * g.out_h * g.out_w;
    grad.bias[o] += std::accumulate(go, go + g.out_h * g.out_w, 0.0);
    for (std::size_t c = 0; c < cin; ++c) {
      for (std::size_t ky = 0; ky < kh; ++ky) {
        const Span ys = valid_span(ky, layer.padding, s, g.in_h, g.out_h);
        for (std::size_t kx = 0; kx < kw; ++kx) {
          const Span xs = valid_span(kx, layer.padding, s, g.in_w, g.out_w);
          const std::size_t k = ((o * cin + c) * kh + ky) * kw + kx;
          const double w = layer.kernel[k];
          double dw = 0.0;
          const std::size_t n = xs.end - xs.begin;
          for (std::size_t y = ys.begin; y < ys.end; ++y) {
            const std::size_t offset = (c * g.in_h + y * s + ky - layer.padding) * g.in_w +
                                       (xs.begin * s + kx - layer.padding);
            const double* src = in + offset;
            double* dst = gin + offset;
            const double* row = go + y * g.out_w + xs.begin;
            for (std::size_t i = 0; i < n; ++i) {
              dw += row[i] * src[i * s];
              dst[i * s] += row[i] * w;
            }
          }
          grad.kernel[k] += dw;
        }
      }
    }
  }
  return grad_in;
}

}  // namespace gaitmap::nn
