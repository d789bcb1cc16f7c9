// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/nn/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "gaitmap/errors.hpp"

namespace gaitmap::nn {

namespace {

void require_branch_pair(const Tensor& a, const Tensor& b, const char* what) {
  require_same_shape(a, b, what);
  if (a.rank() != 3) throw ShapeError(std::string(what) + ": branches must be (C, H, W)");
}

// Intermediates of the score network, kept for the backward pass.
struct ScoreTrace {
  Tensor input;  // concat(a, b)
  Tensor squeezed;
  Tensor mixed;
  Tensor scores;
};

ScoreTrace score(const Tensor& a, const Tensor& b, const AttentionNet& net) {
  require_branch_pair(a, b, "fuse_attention");
  if (net.channels() != a.dim(0))
    throw ShapeError("fuse_attention: net built for " + std::to_string(net.channels()) +
                     " channels, branches have " + std::to_string(a.dim(0)));
  ScoreTrace t;
  t.input = concat_channels(a, b);
  t.squeezed = conv2d(t.input, net.squeeze);
  t.mixed = conv2d(relu(t.squeezed), net.mix);
  t.scores = conv2d(relu(t.mixed), net.expand);
  return t;
}

AttentionWeights softmax_pair(const Tensor& scores, std::size_t channels) {
  const std::size_t n = scores.size() / 2;
  AttentionWeights w{Tensor({channels, scores.dim(1), scores.dim(2)}),
                     Tensor({channels, scores.dim(1), scores.dim(2)})};
  for (std::size_t i = 0; i < n; ++i) {
    const double sa = scores[i];
    const double sb = scores[n + i];
    const double m = std::max(sa, sb);
    const double ea = std::exp(sa - m);
    const double eb = std::exp(sb - m);
    const double z = ea + eb;
    w.a[i] = ea / z;
    w.b[i] = eb / z;
  }
  return w;
}

}  // namespace

const char* to_string(FusionMode mode) {
  switch (mode) {
    case FusionMode::kAdd: return "add";
    case FusionMode::kConcatenate: return "concat";
    case FusionMode::kAttention: return "attention";
  }
  return "?";
}

const char* to_string(FusionLevel level) {
  return level == FusionLevel::kLowLevel ? "low" : "high";
}

FusionMode parse_fusion_mode(const std::string& text) {
  if (text == "add") return FusionMode::kAdd;
  if (text == "concat" || text == "concatenate") return FusionMode::kConcatenate;
  if (text == "attention") return FusionMode::kAttention;
  throw ConfigError("unknown fusion mode \"" + text + "\"");
}

FusionLevel parse_fusion_level(const std::string& text) {
  if (text == "low") return FusionLevel::kLowLevel;
  if (text == "high") return FusionLevel::kHighLevel;
  throw ConfigError("unknown fusion level \"" + text + "\"");
}

Tensor fuse_add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "fuse_add");
  Tensor out = a;
  out += b;
  return out;
}

BranchGrads fuse_add_backward(const Tensor& grad_out) { return {grad_out, grad_out}; }

Tensor fuse_concat(const Tensor& a, const Tensor& b, const ConvLayer& projection) {
  require_branch_pair(a, b, "fuse_concat");
  projection.validate();
  if (projection.kernel_h() != 1 || projection.kernel_w() != 1 ||
      projection.in_channels() != 2 * a.dim(0) || projection.out_channels() != a.dim(0)) {
    throw ShapeError("fuse_concat: projection must be 1x1 from " + std::to_string(2 * a.dim(0)) +
                     " to " + std::to_string(a.dim(0)) + " channels");
  }
  return conv2d(concat_channels(a, b), projection);
}

BranchGrads fuse_concat_backward(const Tensor& a, const Tensor& b, const ConvLayer& projection,
                                 const Tensor& grad_out, ConvLayer& projection_grad) {
  fuse_concat(a, b, projection);  // shape checks
  const Tensor grad_in = conv2d_backward(concat_channels(a, b), projection, grad_out, projection_grad);
  const std::size_t c = a.dim(0);
  return {slice_channels(grad_in, 0, c), slice_channels(grad_in, c, c)};
}

AttentionNet AttentionNet::create(std::size_t channels, std::size_t squeeze_ratio) {
  if (squeeze_ratio == 0 || channels % squeeze_ratio != 0)
    throw ShapeError("attention: channels " + std::to_string(channels) +
                     " not divisible by squeeze ratio " + std::to_string(squeeze_ratio));
  const std::size_t hidden = channels / squeeze_ratio;
  return {ConvLayer::create(hidden, 2 * channels, 1), ConvLayer::create(hidden, hidden, 3, 1, 1),
          ConvLayer::create(2 * channels, hidden, 1)};
}

AttentionNet AttentionNet::zeros_like(const AttentionNet& other) {
  return {ConvLayer::zeros_like(other.squeeze), ConvLayer::zeros_like(other.mix),
          ConvLayer::zeros_like(other.expand)};
}

void AttentionNet::randomize(std::mt19937_64& rng, double lo, double hi) {
  squeeze.randomize(rng, lo, hi);
  mix.randomize(rng, lo, hi);
  expand.randomize(rng, lo, hi);
}

std::vector<Tensor*> AttentionNet::parameters() {
  return {&squeeze.kernel, &squeeze.bias, &mix.kernel, &mix.bias, &expand.kernel, &expand.bias};
}

std::vector<bool> attention_relu_pattern(const Tensor& a, const Tensor& b, const AttentionNet& net) {
  const ScoreTrace t = score(a, b, net);
  std::vector<bool> signs;
  signs.reserve(t.squeezed.size() + t.mixed.size());
  for (double v : t.squeezed.values()) signs.push_back(v > 0.0);
  for (double v : t.mixed.values()) signs.push_back(v > 0.0);
  return signs;
}

AttentionWeights attention_weights(const Tensor& a, const Tensor& b, const AttentionNet& net) {
  return softmax_pair(score(a, b, net).scores, a.dim(0));
}

Tensor fuse_attention(const Tensor& a, const Tensor& b, const AttentionNet& net) {
  const AttentionWeights w = attention_weights(a, b, net);
  Tensor out = Tensor::zeros_like(a);
  for (std::size_t i = 0; i < out.size(); ++i) {
    // Rounding can step a few ulps past the segment; pin it back.
    const double v = w.a[i] * a[i] + w.b[i] * b[i];
    out[i] = std::clamp(v, std::min(a[i], b[i]), std::max(a[i], b[i]));
  }
  return out;
}

BranchGrads fuse_attention_backward(const Tensor& a, const Tensor& b, const AttentionNet& net,
                                    const Tensor& grad_out, AttentionNet& net_grad) {
  require_same_shape(a, grad_out, "fuse_attention_backward");
  const ScoreTrace t = score(a, b, net);
  const std::size_t c = a.dim(0);
  const AttentionWeights w = softmax_pair(t.scores, c);

  BranchGrads g{Tensor::zeros_like(a), Tensor::zeros_like(b)};
  Tensor grad_scores = Tensor::zeros_like(t.scores);
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    g.a[i] = grad_out[i] * w.a[i];
    g.b[i] = grad_out[i] * w.b[i];
    // Two-way softmax: ds_a = w_a w_b (dw_a - dw_b), ds_b = -ds_a.
    const double ds = w.a[i] * w.b[i] * grad_out[i] * (a[i] - b[i]);
    grad_scores[i] = ds;
    grad_scores[n + i] = -ds;
  }

  Tensor grad = conv2d_backward(relu(t.mixed), net.expand, grad_scores, net_grad.expand);
  grad = conv2d_backward(relu(t.squeezed), net.mix, relu_backward(t.mixed, grad), net_grad.mix);
  grad = conv2d_backward(t.input, net.squeeze, relu_backward(t.squeezed, grad), net_grad.squeeze);
  g.a += slice_channels(grad, 0, c);
  g.b += slice_channels(grad, c, c);
  return g;
}

FusionModule FusionModule::create(FusionMode mode, std::size_t channels, std::size_t squeeze_ratio) {
  if (channels == 0) throw ConfigError("fusion channels must be >= 1");
  FusionModule m;
  m.mode_ = mode;
  m.channels_ = channels;
  if (mode == FusionMode::kConcatenate) m.projection_ = ConvLayer::create(channels, 2 * channels, 1);
  if (mode == FusionMode::kAttention) m.attention_ = AttentionNet::create(channels, squeeze_ratio);
  return m;
}

FusionModule FusionModule::zeros_like(const FusionModule& other) {
  FusionModule m;
  m.mode_ = other.mode_;
  m.channels_ = other.channels_;
  if (other.mode_ == FusionMode::kConcatenate) m.projection_ = ConvLayer::zeros_like(other.projection_);
  if (other.mode_ == FusionMode::kAttention) m.attention_ = AttentionNet::zeros_like(other.attention_);
  return m;
}

Tensor FusionModule::forward(const Tensor& a, const Tensor& b) const {
  switch (mode_) {
    case FusionMode::kAdd: return fuse_add(a, b);
    case FusionMode::kConcatenate: return fuse_concat(a, b, projection_);
    case FusionMode::kAttention: return fuse_attention(a, b, attention_);
  }
  throw ConfigError("bad fusion mode");
}

BranchGrads FusionModule::backward(const Tensor& a, const Tensor& b, const Tensor& grad_out,
                                   FusionModule& grad) const {
  if (grad.mode_ != mode_) throw ConfigError("fusion gradient holder has a different mode");
  switch (mode_) {
    case FusionMode::kAdd:
      require_same_shape(a, b, "fuse_add");
      return fuse_add_backward(grad_out);
    case FusionMode::kConcatenate:
      return fuse_concat_backward(a, b, projection_, grad_out, grad.projection_);
    case FusionMode::kAttention:
      return fuse_attention_backward(a, b, attention_, grad_out, grad.attention_);
  }
  throw ConfigError("bad fusion mode");
}

void FusionModule::randomize(std::mt19937_64& rng, double lo, double hi) {
  if (mode_ == FusionMode::kConcatenate) projection_.randomize(rng, lo, hi);
  if (mode_ == FusionMode::kAttention) attention_.randomize(rng, lo, hi);
}

std::vector<bool> FusionModule::relu_pattern(const Tensor& a, const Tensor& b) const {
  if (mode_ == FusionMode::kAttention) return attention_relu_pattern(a, b, attention_);
  return {};
}

std::vector<Tensor*> FusionModule::parameters() {
  if (mode_ == FusionMode::kConcatenate) return projection_.parameters();
  if (mode_ == FusionMode::kAttention) return attention_.parameters();
  return {};
}

}  // namespace gaitmap::nn
