// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Two-branch feature fusion: element-wise add, concatenate + 1x1 projection,
// and attention (a small conv net scores each branch per element, a two-way
// softmax turns the scores into weights, and the output is the weighted sum).

#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "gaitmap/nn/conv.hpp"
#include "gaitmap/nn/tensor.hpp"

namespace gaitmap::nn {

enum class FusionMode { kAdd, kConcatenate, kAttention };
enum class FusionLevel { kLowLevel, kHighLevel };

inline constexpr std::size_t kDefaultSqueezeRatio = 4;

const char* to_string(FusionMode mode);
const char* to_string(FusionLevel level);
/// Accepts "add", "concat"/"concatenate", "attention". Throws ConfigError.
FusionMode parse_fusion_mode(const std::string& text);
/// Accepts "low"/"high". Throws ConfigError.
FusionLevel parse_fusion_level(const std::string& text);

struct FusionConfig {
  FusionMode mode = FusionMode::kAttention;
  FusionLevel level = FusionLevel::kLowLevel;
  std::size_t channels = 16;  // per-branch channels at the fusion point
};

/// Gradients w.r.t. the two branch inputs.
struct BranchGrads {
  Tensor a;
  Tensor b;
};

Tensor fuse_add(const Tensor& a, const Tensor& b);
BranchGrads fuse_add_backward(const Tensor& grad_out);

/// concat(a, b) along channels, then a 1x1 projection 2C -> C.
/// Throws ShapeError on mismatched inputs or a projection that is not 1x1, 2C -> C.
Tensor fuse_concat(const Tensor& a, const Tensor& b, const ConvLayer& projection);
BranchGrads fuse_concat_backward(const Tensor& a, const Tensor& b, const ConvLayer& projection,
                                 const Tensor& grad_out, ConvLayer& projection_grad);

/// Score network: 1x1 squeeze 2C -> C/r, ReLU, 3x3 (pad 1) C/r -> C/r, ReLU,
/// 1x1 expand C/r -> 2C. Output channels [0, C) score branch a, [C, 2C) branch b.
struct AttentionNet {
  ConvLayer squeeze;
  ConvLayer mix;
  ConvLayer expand;

  /// Zero weights. Throws ShapeError if C is not divisible by r.
  static AttentionNet create(std::size_t channels, std::size_t squeeze_ratio = kDefaultSqueezeRatio);
  static AttentionNet zeros_like(const AttentionNet& other);
  std::size_t channels() const { return expand.out_channels() / 2; }
  void randomize(std::mt19937_64& rng, double lo = -0.1, double hi = 0.1);
  std::vector<Tensor*> parameters();
};

struct AttentionWeights {
  Tensor a;  // weight on branch a, in (0, 1]
  Tensor b;  // weight on branch b; a + b == 1 per element up to rounding
};

AttentionWeights attention_weights(const Tensor& a, const Tensor& b, const AttentionNet& net);

/// Sign (pre-activation > 0) of every ReLU unit in the score network.
std::vector<bool> attention_relu_pattern(const Tensor& a, const Tensor& b, const AttentionNet& net);

/// w_a * a + w_b * b with (w_a, w_b) = softmax(s_a, s_b) per (channel, row, col).
Tensor fuse_attention(const Tensor& a, const Tensor& b, const AttentionNet& net);
BranchGrads fuse_attention_backward(const Tensor& a, const Tensor& b, const AttentionNet& net,
                                    const Tensor& grad_out, AttentionNet& net_grad);

/// A fusion block of any mode, holding only the parameters its mode needs.
class FusionModule {
 public:
  FusionModule() = default;
  static FusionModule create(FusionMode mode, std::size_t channels,
                             std::size_t squeeze_ratio = kDefaultSqueezeRatio);
  static FusionModule zeros_like(const FusionModule& other);

  FusionMode mode() const { return mode_; }
  std::size_t channels() const { return channels_; }
  ConvLayer& projection() { return projection_; }
  const ConvLayer& projection() const { return projection_; }
  AttentionNet& attention() { return attention_; }
  const AttentionNet& attention() const { return attention_; }

  Tensor forward(const Tensor& a, const Tensor& b) const;
  /// Accumulates parameter gradients into `grad` (same mode and sizes).
  BranchGrads backward(const Tensor& a, const Tensor& b, const Tensor& grad_out,
                       FusionModule& grad) const;

  void randomize(std::mt19937_64& rng, double lo = -0.1, double hi = 0.1);
  std::vector<Tensor*> parameters();
  /// ReLU signs inside the module (attention only; empty otherwise).
  std::vector<bool> relu_pattern(const Tensor& a, const Tensor& b) const;

 private:
  FusionMode mode_ = FusionMode::kAdd;
  std::size_t channels_ = 0;
  ConvLayer projection_;
  AttentionNet attention_;
};

}  // namespace gaitmap::nn
