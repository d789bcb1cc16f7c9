// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Desk-scale two-branch gait network.
//
//   Conv0   3x3 conv, in -> stem channels (1 for silhouettes, 2 for skeleton maps)
//   Stage1  two 3x3 convs, stem -> stem
//   Stage2  two 3x3 convs, stem -> embedding, first conv stride 2
//   Stage3  two 3x3 convs, embedding -> embedding, first conv stride 2
//   Stage4  two 3x3 convs, embedding -> embedding
//   head    global spatial average -> embedding vector
//
// Every conv is followed by ReLU. Low-level fusion joins the branches after
// Stage1 (Stage2-4 run on the fused stream); high-level fusion gives each
// branch its own Stage2 and Stage3 and joins them before Stage4.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gaitmap/nn/conv.hpp"
#include "gaitmap/nn/fusion.hpp"
#include "gaitmap/nn/tensor.hpp"

namespace gaitmap::nn {

struct ToyConfig {
  std::size_t stem_channels = 16;
  std::size_t embedding_dim = 32;
  std::size_t squeeze_ratio = kDefaultSqueezeRatio;
};

struct Stage {
  ConvLayer first;
  ConvLayer second;
};

struct Branch {
  ConvLayer conv0;
  std::vector<Stage> stages;  // Stage1, plus Stage2 and Stage3 for high-level fusion
};

/// Channel count at the fusion point for a level.
std::size_t fusion_channels(FusionLevel level, const ToyConfig& toy);

struct ToyParams {
  FusionConfig fusion_config;
  ToyConfig toy;
  Branch silhouette;        // 1 input channel
  Branch skeleton;          // 2 input channels
  std::vector<Stage> trunk;  // Stage2..4 (low-level) or Stage4 (high-level)
  FusionModule fusion;

  /// Zero parameters. Throws ConfigError if `cfg.channels` disagrees with
  /// fusion_channels(cfg.level, toy).
  static ToyParams create(const FusionConfig& cfg, const ToyConfig& toy = {});
  /// Seeded U[-0.1, 0.1]. Every component draws from its own seed derived
  /// from `seed` and the component's name, so components shared between
  /// low- and high-level layouts receive identical values.
  static ToyParams random(const FusionConfig& cfg, std::uint64_t seed, const ToyConfig& toy = {});
  static ToyParams zeros_like(const ToyParams& other);

  /// Fixed traversal order, identical for parameters and their gradients.
  std::vector<Tensor*> parameters();
  std::size_t parameter_count();
};

/// Silhouette (1, H, W) + skeleton map (2, H, W) -> embedding (embedding_dim).
/// When `relu_signs` is given it receives the sign (pre-activation > 0) of
/// every ReLU unit, fusion included.
Tensor forward_toy_skeletongait_pp(const Tensor& silhouette, const Tensor& skeleton,
                                   const ToyParams& params, std::vector<bool>* relu_signs = nullptr);

struct ToyGradients {
  ToyParams params;
  Tensor silhouette;
  Tensor skeleton;
};

/// Gradients of <grad_embedding, forward(...)> w.r.t. parameters and inputs.
ToyGradients backward_toy_skeletongait_pp(const Tensor& silhouette, const Tensor& skeleton,
                                          const ToyParams& params, const Tensor& grad_embedding);

/// One branch followed by `trunk`, no fusion: the single-input model
/// (a silhouette network, or the skeleton-map network with a 2-channel Conv0).
Tensor forward_single_branch(const Tensor& input, const Branch& branch, std::span<const Stage> trunk);

/// max(0, |a - p| - |a - n| + margin) with Euclidean distances.
/// Throws ShapeError on mismatched shapes.
double triplet_loss(const Tensor& anchor, const Tensor& positive, const Tensor& negative,
                    double margin = 0.2);

}  // namespace gaitmap::nn
