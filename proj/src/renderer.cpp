// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitmap/renderer.hpp"

#include <algorithm>
#include <cmath>

#include "gaitmap/errors.hpp"

namespace gaitmap {

void RenderOptions::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");
  if (!(truncation_radius >= 3.0)) throw ConfigError("truncation radius must be >= 3 sigma");
}

double point_segment_distance_sq(double px, double py, double ax, double ay, double bx,
                                 double by) {
  const double dx = bx - ax;
  const double dy = by - ay;
  const double len_sq = dx * dx + dy * dy;
  double t = 0.0;
  if (len_sq > 0.0) t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len_sq, 0.0, 1.0);
  const double ex = px - (ax + t * dx);
  const double ey = py - (ay + t * dy);
  return ex * ex + ey * ey;
}

namespace {

// Half-open pixel range [lo, hi) covering [center_lo - radius, center_hi + radius],
// clipped to [0, size).
struct Span {
  int lo = 0;
  int hi = 0;
  bool empty() const { return hi <= lo; }
};

Span support(double center_lo, double center_hi, double radius, int size) {
  const double lo = std::clamp(std::ceil(center_lo - radius), 0.0, static_cast<double>(size));
  const double hi =
      std::clamp(std::floor(center_hi + radius) + 1.0, 0.0, static_cast<double>(size));
  return {static_cast<int>(lo), static_cast<int>(hi)};
}

void accumulate_joints(const NormalizedFrame& frame, const RenderOptions& opts,
                       std::vector<double>& acc) {
  const int r = frame.canvas;
  const double inv_two_var = 1.0 / (2.0 * opts.sigma * opts.sigma);
  const double radius = opts.truncation_radius * opts.sigma;
  std::vector<double> gx;
  std::vector<double> gy;
  for (const auto& kp : frame.joints) {
    if (kp.c == 0.0) continue;
    const Span cols = support(kp.x, kp.x, radius, r);
    const Span rows = support(kp.y, kp.y, radius, r);
    if (cols.empty() || rows.empty()) continue;

    // exp(-(dx^2 + dy^2) k) factors into a column term and a row term.
    gx.resize(cols.hi - cols.lo);
    gy.resize(rows.hi - rows.lo);
    for (int i = cols.lo; i < cols.hi; ++i) {
      const double d = i - kp.x;
      gx[i - cols.lo] = std::exp(-d * d * inv_two_var);
    }
    for (int j = rows.lo; j < rows.hi; ++j) {
      const double d = j - kp.y;
      gy[j - rows.lo] = kp.c * std::exp(-d * d * inv_two_var);
    }
    for (int j = rows.lo; j < rows.hi; ++j) {
      double* row = acc.data() + static_cast<std::size_t>(j) * r;
      const double wy = gy[j - rows.lo];
      for (int i = cols.lo; i < cols.hi; ++i) row[i] += wy * gx[i - cols.lo];
    }
  }
}

void accumulate_limbs(const NormalizedFrame& frame, const Topology& topology,
                      const RenderOptions& opts, std::vector<double>& acc) {
  const int r = frame.canvas;
  const double inv_two_var = 1.0 / (2.0 * opts.sigma * opts.sigma);
  const double radius = opts.truncation_radius * opts.sigma;
  for (const auto& limb : topology.limbs()) {
    const Keypoint& a = frame.joints[limb.from];
    const Keypoint& b = frame.joints[limb.to];
    const double weight = std::min(a.c, b.c);
    if (weight == 0.0) continue;
    const Span cols = support(std::min(a.x, b.x), std::max(a.x, b.x), radius, r);
    const Span rows = support(std::min(a.y, b.y), std::max(a.y, b.y), radius, r);
    if (cols.empty() || rows.empty()) continue;
    for (int j = rows.lo; j < rows.hi; ++j) {
      double* row = acc.data() + static_cast<std::size_t>(j) * r;
      for (int i = cols.lo; i < cols.hi; ++i) {
        const double d2 = point_segment_distance_sq(i, j, a.x, a.y, b.x, b.y);
        row[i] += weight * std::exp(-d2 * inv_two_var);
      }
    }
  }
}

// Independent segment-distance formulation for the reference renderer:
// perpendicular distance via the cross product when the foot of the
// perpendicular lies on the segment, nearest endpoint otherwise.
double reference_segment_distance_sq(double px, double py, const Keypoint& a, const Keypoint& b) {
  const double ux = b.x - a.x;
  const double uy = b.y - a.y;
  const double wx = px - a.x;
  const double wy = py - a.y;
  const double len_sq = ux * ux + uy * uy;
  const double along = wx * ux + wy * uy;
  const double to_a = wx * wx + wy * wy;
  const double to_b = (px - b.x) * (px - b.x) + (py - b.y) * (py - b.y);
  if (len_sq == 0.0 || along <= 0.0) return to_a;
  if (along >= len_sq) return to_b;
  const double cross = wx * uy - wy * ux;
  return cross * cross / len_sq;
}

std::vector<float> to_float(const std::vector<double>& acc) {
  std::vector<float> out(acc.size());
  std::transform(acc.begin(), acc.end(), out.begin(),
                 [](double v) { return static_cast<float>(v); });
  return out;
}

void check_inputs(const NormalizedFrame& frame, const Topology* topology,
                  const RenderOptions& opts) {
  opts.validate();
  if (frame.canvas < 1) throw ConfigError("canvas must be positive");
  if (topology && frame.joints.size() != topology->joint_count())
    throw ValidationError("joint count does not match topology");
}

std::size_t canvas_pixels(const NormalizedFrame& frame) {
  return static_cast<std::size_t>(frame.canvas) * frame.canvas;
}

}  // namespace

std::vector<float> render_joint_map(const NormalizedFrame& frame, const RenderOptions& opts) {
  check_inputs(frame, nullptr, opts);
  std::vector<double> acc(canvas_pixels(frame), 0.0);
  accumulate_joints(frame, opts, acc);
  return to_float(acc);
}

std::vector<float> render_limb_map(const NormalizedFrame& frame, const Topology& topology,
                                   const RenderOptions& opts) {
  check_inputs(frame, &topology, opts);
  std::vector<double> acc(canvas_pixels(frame), 0.0);
  accumulate_limbs(frame, topology, opts, acc);
  return to_float(acc);
}

SkeletonMap render_skeleton_map(const NormalizedFrame& frame, const Topology& topology,
                                const RenderOptions& opts) {
  std::vector<float> joints = render_joint_map(frame, opts);
  std::vector<float> limbs = render_limb_map(frame, topology, opts);
  SkeletonMap map(frame.canvas, frame.canvas, opts.sigma);
  std::copy(joints.begin(), joints.end(), map.data.begin());
  std::copy(limbs.begin(), limbs.end(), map.data.begin() + static_cast<std::ptrdiff_t>(joints.size()));
  return map;
}

SkeletonMap render_skeleton_map_bruteforce(const NormalizedFrame& frame, const Topology& topology,
                                           const RenderOptions& opts) {
  check_inputs(frame, &topology, opts);
  const int r = frame.canvas;
  const double two_var = 2.0 * opts.sigma * opts.sigma;
  SkeletonMap map(r, r, opts.sigma);
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < r; ++i) {
      double joint = 0.0;
      for (const auto& kp : frame.joints) {
        const double dx = i - kp.x;
        const double dy = j - kp.y;
        joint += std::exp(-(dx * dx + dy * dy) / two_var) * kp.c;
      }
      double limb = 0.0;
      for (const auto& l : topology.limbs()) {
        const Keypoint& a = frame.joints[l.from];
        const Keypoint& b = frame.joints[l.to];
        const double d2 = reference_segment_distance_sq(i, j, a, b);
        limb += std::exp(-d2 / two_var) * std::min(a.c, b.c);
      }
      map.at(0, j, i) = static_cast<float>(joint);
      map.at(1, j, i) = static_cast<float>(limb);
    }
  }
  return map;
}

}  // namespace gaitmap
