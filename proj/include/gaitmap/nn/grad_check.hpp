// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Central finite-difference gradient checking.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "gaitmap/nn/conv.hpp"
#include "gaitmap/nn/fusion.hpp"
#include "gaitmap/nn/tensor.hpp"
#include "gaitmap/nn/toy_model.hpp"

namespace gaitmap::nn {

inline constexpr double kGradCheckStep = 1e-3;
inline constexpr double kGradCheckTolerance = 1e-3;
/// Rounding in loss(+h) - loss(-h), in units of the loss's last place.
inline constexpr double kRoundoffUlps = 4.0;

struct GradCheckReport {
  std::size_t checked = 0;
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;  // flat index over all checked values
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  /// Values whose +-h stencil flips the sign of some ReLU pre-activation.
  /// The difference quotient spans a kink there, so they are counted but
  /// left out of max_rel_error.
  std::size_t kinks = 0;
  /// Values whose gradient is too small for the difference quotient to
  /// resolve to `tol`: max(|a|, |n|) * tol is below the quotient's rounding
  /// bound r = kRoundoffUlps * eps * max|loss| / 2h. These must instead
  /// agree absolutely, |a - n| <= r.
  std::size_t below_resolution = 0;
  /// Largest |a - n| / r over the below-resolution values (must be <= 1).
  double max_noise_ratio = 0.0;
  bool passed = true;
};

/// Signs of every ReLU pre-activation at the current parameter values.
/// Always called straight after `loss` at the same values, so it may return
/// state recorded by that evaluation.
using ReluPattern = std::function<std::vector<bool>()>;

/// Perturbs every element of `params` by +-h, evaluates `loss`, and compares
/// (loss(+h) - loss(-h)) / 2h against the matching element of `analytic`.
/// Relative error is |a - n| / max(|a|, |n|), taken as 0 when both are exactly 0.
/// `params` are restored before returning. Passes iff max_rel_error <= tol and
/// max_noise_ratio <= 1.
GradCheckReport grad_check(const std::function<double()>& loss, const std::vector<Tensor*>& params,
                           const std::vector<const Tensor*>& analytic, double h = kGradCheckStep,
                           double tol = kGradCheckTolerance);
/// As above, skipping values whose stencil crosses a ReLU kink (see
/// GradCheckReport::kinks). Fails if every value is skipped.
GradCheckReport grad_check(const std::function<double()>& loss, const std::vector<Tensor*>& params,
                           const std::vector<const Tensor*>& analytic, const ReluPattern& pattern,
                           double h = kGradCheckStep, double tol = kGradCheckTolerance);

// Parameter checks with a sum-of-outputs head.

GradCheckReport grad_check_fuse_add(const Tensor& a, const Tensor& b, double h = kGradCheckStep,
                                    double tol = kGradCheckTolerance);
GradCheckReport grad_check_conv2d(ConvLayer layer, const Tensor& input, double h = kGradCheckStep,
                                  double tol = kGradCheckTolerance);
GradCheckReport grad_check_fuse_concat(const Tensor& a, const Tensor& b, ConvLayer projection,
                                       double h = kGradCheckStep, double tol = kGradCheckTolerance);
GradCheckReport grad_check_fuse_attention(const Tensor& a, const Tensor& b, AttentionNet net,
                                          double h = kGradCheckStep,
                                          double tol = kGradCheckTolerance);
GradCheckReport grad_check_toy(const Tensor& silhouette, const Tensor& skeleton, ToyParams params,
                               double h = kGradCheckStep, double tol = kGradCheckTolerance);

/// Input-gradient checks (the branch tensors are the perturbed values).
GradCheckReport grad_check_fusion_inputs(const FusionModule& module, Tensor a, Tensor b,
                                         double h = kGradCheckStep,
                                         double tol = kGradCheckTolerance);

}  // namespace gaitmap::nn
