// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/nn/toy_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <type_traits>
#include <utility>

#include "gaitmap/errors.hpp"

namespace gaitmap::nn {

namespace {

Stage make_stage(std::size_t in, std::size_t out, std::size_t stride) {
  return {ConvLayer::create(out, in, 3, stride, 1), ConvLayer::create(out, out, 3, 1, 1)};
}

Stage zeros_like(const Stage& s) { return {ConvLayer::zeros_like(s.first), ConvLayer::zeros_like(s.second)}; }

Branch zeros_like(const Branch& b) {
  Branch out{ConvLayer::zeros_like(b.conv0), {}};
  for (const auto& s : b.stages) out.stages.push_back(zeros_like(s));
  return out;
}

std::uint64_t component_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t x = seed ^ h;
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void randomize(ConvLayer& layer, std::uint64_t seed, const std::string& name) {
  std::mt19937_64 rng(component_seed(seed, name));
  layer.randomize(rng);
}

void randomize(Stage& stage, std::uint64_t seed, const std::string& name) {
  randomize(stage.first, seed, name + ".first");
  randomize(stage.second, seed, name + ".second");
}

// A run of conv -> ReLU steps.
template <typename Layer>
std::vector<Layer*> chain(Layer& conv0, auto& stages) {
  std::vector<Layer*> layers{&conv0};
  for (auto& s : stages) {
    layers.push_back(&s.first);
    layers.push_back(&s.second);
  }
  return layers;
}

template <typename StageRange>
auto stage_chain(StageRange& stages) {
  using Layer = std::remove_reference_t<decltype((stages.begin()->first))>;
  std::vector<Layer*> layers;
  for (auto& s : stages) {
    layers.push_back(&s.first);
    layers.push_back(&s.second);
  }
  return layers;
}

struct ChainTrace {
  std::vector<Tensor> inputs;
  std::vector<Tensor> preacts;
};

Tensor run_chain(const std::vector<const ConvLayer*>& layers, Tensor x, ChainTrace* trace) {
  for (const ConvLayer* layer : layers) {
    Tensor z = conv2d(x, *layer);
    if (trace) {
      trace->inputs.push_back(std::move(x));
      trace->preacts.push_back(z);
    }
    x = relu(z);
  }
  return x;
}

Tensor backprop_chain(const std::vector<const ConvLayer*>& layers, const ChainTrace& trace,
                      Tensor grad, const std::vector<ConvLayer*>& grads) {
  for (std::size_t k = layers.size(); k-- > 0;) {
    grad = relu_backward(trace.preacts[k], grad);
    grad = conv2d_backward(trace.inputs[k], *layers[k], grad, *grads[k]);
  }
  return grad;
}

void require_input(const Tensor& x, std::size_t channels, const char* what) {
  if (x.rank() != 3 || x.dim(0) != channels)
    throw ShapeError(std::string(what) + ": expected " + std::to_string(channels) +
                     " input channels, got " + shape_string(x.shape()));
}

}  // namespace

std::size_t fusion_channels(FusionLevel level, const ToyConfig& toy) {
  return level == FusionLevel::kLowLevel ? toy.stem_channels : toy.embedding_dim;
}

ToyParams ToyParams::create(const FusionConfig& cfg, const ToyConfig& toy) {
  if (toy.stem_channels == 0 || toy.embedding_dim == 0) throw ConfigError("toy widths must be >= 1");
  if (cfg.channels != fusion_channels(cfg.level, toy))
    throw ConfigError("fusion channels " + std::to_string(cfg.channels) + " do not match the " +
                      to_string(cfg.level) + "-level fusion point (" +
                      std::to_string(fusion_channels(cfg.level, toy)) + ")");
  const std::size_t stem = toy.stem_channels;
  const std::size_t emb = toy.embedding_dim;

  ToyParams p;
  p.fusion_config = cfg;
  p.toy = toy;
  p.silhouette.conv0 = ConvLayer::create(stem, 1, 3, 1, 1);
  p.skeleton.conv0 = ConvLayer::create(stem, 2, 3, 1, 1);
  for (Branch* b : {&p.silhouette, &p.skeleton}) {
    b->stages.push_back(make_stage(stem, stem, 1));
    if (cfg.level == FusionLevel::kHighLevel) {
      b->stages.push_back(make_stage(stem, emb, 2));
      b->stages.push_back(make_stage(emb, emb, 2));
    }
  }
  if (cfg.level == FusionLevel::kLowLevel) {
    p.trunk.push_back(make_stage(stem, emb, 2));
    p.trunk.push_back(make_stage(emb, emb, 2));
  }
  p.trunk.push_back(make_stage(emb, emb, 1));
  p.fusion = FusionModule::create(cfg.mode, cfg.channels, toy.squeeze_ratio);
  return p;
}

ToyParams ToyParams::random(const FusionConfig& cfg, std::uint64_t seed, const ToyConfig& toy) {
  ToyParams p = create(cfg, toy);
  const bool low = cfg.level == FusionLevel::kLowLevel;
  for (auto [branch, name] : {std::pair{&p.silhouette, "silhouette"}, std::pair{&p.skeleton, "skeleton"}}) {
    randomize(branch->conv0, seed, std::string(name) + ".conv0");
    for (std::size_t s = 0; s < branch->stages.size(); ++s)
      randomize(branch->stages[s], seed, std::string(name) + ".stage" + std::to_string(s + 1));
  }
  const std::size_t first_trunk_stage = low ? 2 : 4;
  for (std::size_t s = 0; s < p.trunk.size(); ++s)
    randomize(p.trunk[s], seed, "trunk.stage" + std::to_string(first_trunk_stage + s));
  std::mt19937_64 rng(component_seed(seed, std::string("fusion.") + to_string(cfg.mode) + "." +
                                               to_string(cfg.level)));
  p.fusion.randomize(rng);
  return p;
}

ToyParams ToyParams::zeros_like(const ToyParams& other) {
  ToyParams p;
  p.fusion_config = other.fusion_config;
  p.toy = other.toy;
  p.silhouette = nn::zeros_like(other.silhouette);
  p.skeleton = nn::zeros_like(other.skeleton);
  for (const auto& s : other.trunk) p.trunk.push_back(nn::zeros_like(s));
  p.fusion = FusionModule::zeros_like(other.fusion);
  return p;
}

std::vector<Tensor*> ToyParams::parameters() {
  std::vector<Tensor*> out;
  auto add_layers = [&out](const std::vector<ConvLayer*>& layers) {
    for (ConvLayer* l : layers) {
      out.push_back(&l->kernel);
      out.push_back(&l->bias);
    }
  };
  add_layers(chain(silhouette.conv0, silhouette.stages));
  add_layers(chain(skeleton.conv0, skeleton.stages));
  add_layers(stage_chain(trunk));
  for (Tensor* t : fusion.parameters()) out.push_back(t);
  return out;
}

std::size_t ToyParams::parameter_count() {
  std::size_t n = 0;
  for (Tensor* t : parameters()) n += t->size();
  return n;
}

Tensor forward_toy_skeletongait_pp(const Tensor& silhouette, const Tensor& skeleton,
                                   const ToyParams& params, std::vector<bool>* relu_signs) {
  require_input(silhouette, 1, "silhouette");
  require_input(skeleton, 2, "skeleton map");
  if (!relu_signs) {
    const Tensor sil = run_chain(chain(params.silhouette.conv0, params.silhouette.stages), silhouette, nullptr);
    const Tensor skel = run_chain(chain(params.skeleton.conv0, params.skeleton.stages), skeleton, nullptr);
    const Tensor fused = params.fusion.forward(sil, skel);
    return global_average(run_chain(stage_chain(params.trunk), fused, nullptr));
  }
  ChainTrace sil_trace, skel_trace, trunk_trace;
  const Tensor sil = run_chain(chain(params.silhouette.conv0, params.silhouette.stages), silhouette, &sil_trace);
  const Tensor skel = run_chain(chain(params.skeleton.conv0, params.skeleton.stages), skeleton, &skel_trace);
  const Tensor top = run_chain(stage_chain(params.trunk), params.fusion.forward(sil, skel), &trunk_trace);
  *relu_signs = params.fusion.relu_pattern(sil, skel);
  for (const ChainTrace* t : {&sil_trace, &skel_trace, &trunk_trace})
    for (const Tensor& z : t->preacts)
      for (double v : z.values()) relu_signs->push_back(v > 0.0);
  return global_average(top);
}

ToyGradients backward_toy_skeletongait_pp(const Tensor& silhouette, const Tensor& skeleton,
                                          const ToyParams& params, const Tensor& grad_embedding) {
  require_input(silhouette, 1, "silhouette");
  require_input(skeleton, 2, "skeleton map");
  const auto sil_layers = chain(params.silhouette.conv0, params.silhouette.stages);
  const auto skel_layers = chain(params.skeleton.conv0, params.skeleton.stages);
  const auto trunk_layers = stage_chain(params.trunk);

  ChainTrace sil_trace, skel_trace, trunk_trace;
  const Tensor sil = run_chain(sil_layers, silhouette, &sil_trace);
  const Tensor skel = run_chain(skel_layers, skeleton, &skel_trace);
  const Tensor fused = params.fusion.forward(sil, skel);
  const Tensor top = run_chain(trunk_layers, fused, &trunk_trace);

  ToyGradients g{ToyParams::zeros_like(params), {}, {}};
  Tensor grad = global_average_backward(top.shape(), grad_embedding);
  grad = backprop_chain(trunk_layers, trunk_trace, std::move(grad), stage_chain(g.params.trunk));
  BranchGrads branch = params.fusion.backward(sil, skel, grad, g.params.fusion);
  g.silhouette = backprop_chain(sil_layers, sil_trace, std::move(branch.a),
                                chain(g.params.silhouette.conv0, g.params.silhouette.stages));
  g.skeleton = backprop_chain(skel_layers, skel_trace, std::move(branch.b),
                              chain(g.params.skeleton.conv0, g.params.skeleton.stages));
  return g;
}

Tensor forward_single_branch(const Tensor& input, const Branch& branch, std::span<const Stage> trunk) {
  Tensor x = run_chain(chain(branch.conv0, branch.stages), input, nullptr);
  return global_average(run_chain(stage_chain(trunk), std::move(x), nullptr));
}

double triplet_loss(const Tensor& anchor, const Tensor& positive, const Tensor& negative,
                    double margin) {
  require_same_shape(anchor, positive, "triplet_loss");
  require_same_shape(anchor, negative, "triplet_loss");
  double dp = 0.0;
  double dn = 0.0;
  for (std::size_t i = 0; i < anchor.size(); ++i) {
    dp += (anchor[i] - positive[i]) * (anchor[i] - positive[i]);
    dn += (anchor[i] - negative[i]) * (anchor[i] - negative[i]);
  }
  return std::max(0.0, std::sqrt(dp) - std::sqrt(dn) + margin);
}

}  // namespace gaitmap::nn
