// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaitmap/errors.hpp"

namespace gaitmap::nn {

namespace {

Tensor ones_like(const Tensor& t) {
  Tensor g = Tensor::zeros_like(t);
  std::fill(g.values().begin(), g.values().end(), 1.0);
  return g;
}

std::vector<const Tensor*> const_view(const std::vector<Tensor*>& v) { return {v.begin(), v.end()}; }

}  // namespace

GradCheckReport grad_check(const std::function<double()>& loss, const std::vector<Tensor*>& params,
                           const std::vector<const Tensor*>& analytic, const ReluPattern& pattern,
                           double h, double tol) {
  if (params.size() != analytic.size()) throw ShapeError("grad_check: parameter/gradient count mismatch");
  GradCheckReport report;
  std::size_t flat = 0;
  loss();
  const std::vector<bool> base = pattern ? pattern() : std::vector<bool>{};
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& param = *params[p];
    const Tensor& grad = *analytic[p];
    require_same_shape(param, grad, "grad_check");
    for (std::size_t i = 0; i < param.size(); ++i, ++flat) {
      const double saved = param[i];
      param[i] = saved + h;
      const double up = loss();
      bool kink = pattern && pattern() != base;
      param[i] = saved - h;
      const double down = loss();
      kink = kink || (pattern && pattern() != base);
      param[i] = saved;
      ++report.checked;
      if (kink) {
        ++report.kinks;
        continue;
      }

      const double numeric = (up - down) / (2.0 * h);
      const double a = grad[i];
      const double scale = std::max(std::abs(a), std::abs(numeric));
      const double roundoff = kRoundoffUlps * std::numeric_limits<double>::epsilon() *
                              std::max(std::abs(up), std::abs(down)) / (2.0 * h);
      if (scale * tol < roundoff) {
        ++report.below_resolution;
        report.max_noise_ratio = std::max(report.max_noise_ratio, std::abs(a - numeric) / roundoff);
        continue;
      }
      const double rel = scale == 0.0 ? 0.0 : std::abs(a - numeric) / scale;
      if (rel > report.max_rel_error || std::isnan(rel)) {
        report.max_rel_error = rel;
        report.worst_index = flat;
        report.worst_analytic = a;
        report.worst_numeric = numeric;
      }
    }
  }
  report.passed = report.max_rel_error <= tol && report.max_noise_ratio <= 1.0 &&
                  (report.checked == 0 || report.kinks < report.checked);
  return report;
}

GradCheckReport grad_check(const std::function<double()>& loss, const std::vector<Tensor*>& params,
                           const std::vector<const Tensor*>& analytic, double h, double tol) {
  return grad_check(loss, params, analytic, ReluPattern{}, h, tol);
}

GradCheckReport grad_check_fuse_add(const Tensor& a, const Tensor& b, double h, double tol) {
  require_same_shape(a, b, "fuse_add");
  return grad_check([&] { return fuse_add(a, b).sum(); }, {}, {}, h, tol);
}

GradCheckReport grad_check_conv2d(ConvLayer layer, const Tensor& input, double h, double tol) {
  const Tensor out = conv2d(input, layer);
  ConvLayer grad = ConvLayer::zeros_like(layer);
  conv2d_backward(input, layer, ones_like(out), grad);
  return grad_check([&] { return conv2d(input, layer).sum(); }, layer.parameters(),
                    const_view(grad.parameters()), h, tol);
}

GradCheckReport grad_check_fuse_concat(const Tensor& a, const Tensor& b, ConvLayer projection,
                                       double h, double tol) {
  const Tensor out = fuse_concat(a, b, projection);
  ConvLayer grad = ConvLayer::zeros_like(projection);
  fuse_concat_backward(a, b, projection, ones_like(out), grad);
  return grad_check([&] { return fuse_concat(a, b, projection).sum(); }, projection.parameters(),
                    const_view(grad.parameters()), h, tol);
}

GradCheckReport grad_check_fuse_attention(const Tensor& a, const Tensor& b, AttentionNet net,
                                          double h, double tol) {
  const Tensor out = fuse_attention(a, b, net);
  AttentionNet grad = AttentionNet::zeros_like(net);
  fuse_attention_backward(a, b, net, ones_like(out), grad);
  return grad_check([&] { return fuse_attention(a, b, net).sum(); }, net.parameters(),
                    const_view(grad.parameters()), [&] { return attention_relu_pattern(a, b, net); }, h,
                    tol);
}

GradCheckReport grad_check_toy(const Tensor& silhouette, const Tensor& skeleton, ToyParams params,
                               double h, double tol) {
  const Tensor emb = forward_toy_skeletongait_pp(silhouette, skeleton, params);
  ToyGradients g = backward_toy_skeletongait_pp(silhouette, skeleton, params, ones_like(emb));
  std::vector<bool> signs;
  return grad_check([&] { return forward_toy_skeletongait_pp(silhouette, skeleton, params, &signs).sum(); },
                    params.parameters(), const_view(g.params.parameters()), [&] { return signs; }, h, tol);
}

GradCheckReport grad_check_fusion_inputs(const FusionModule& module, Tensor a, Tensor b, double h,
                                         double tol) {
  const Tensor out = module.forward(a, b);
  FusionModule sink = FusionModule::zeros_like(module);
  const BranchGrads g = module.backward(a, b, ones_like(out), sink);
  return grad_check([&] { return module.forward(a, b).sum(); }, {&a, &b}, {&g.a, &g.b},
                    [&] { return module.relu_pattern(a, b); }, h, tol);
}

}  // namespace gaitmap::nn
