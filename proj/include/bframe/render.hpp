// Copyright 2026 The bframe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "bframe/scene.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bframe {

/// Screen-space footprint of a primitive.
struct Splat2D {
  Vec2 center2d = Vec2::Zero();
  Mat2 cov2d = Mat2::Identity();
  double depth = 0.0;  // camera-space z of the center
  std::int64_t source_id = 0;
};

/// Effective alpha below this is not composited.
inline constexpr double kAlphaFloor = 1.0 / 255.0;
/// Accumulated alpha needed before depth/normal pixels are defined.
inline constexpr double kCoverageFloor = 1e-4;

/// exp(-1/2 (x-mu)^T Sigma^-1 (x-mu)). Throws Error("ill_conditioned") when
/// the covariance is not positive definite or its condition number exceeds
/// 1e12.
double evaluate_gaussian(const GaussianPrimitive& primitive, const Vec3& x);

/// Pinhole projection of the center with cov2d = J Sigma J^T. Returns
/// nullopt behind the camera, for a degenerate footprint, or when the
/// cutoff box misses the image.
std::optional<Splat2D> project_splat(const GaussianPrimitive& primitive,
                                     const CameraView& view, double cutoff_sigmas);

/// Pixel-space box [x0,x1] x [y0,y1] covered by cutoff sigmas, clipped to
/// the image; empty when x0 > x1 or y0 > y1.
struct PixelBox {
  int x0 = 0, x1 = -1, y0 = 0, y1 = -1;
};
PixelBox footprint_box(const Splat2D& splat, double cutoff_sigmas, int width, int height);

/// opacity * exp(-1/2 d^T cov2d^-1 d), d = pixel - center2d.
double splat_alpha(const Splat2D& splat, double opacity, const Vec2& pixel);

struct Contribution {
  double depth = 0.0;
  double alpha = 0.0;
  Vec3 value = Vec3::Zero();
};

struct Composite {
  Vec3 value = Vec3::Zero();
  double transmittance = 1.0;
};

/// Front-to-back compositing sum_i T_{i-1} alpha_i c_i. Throws
/// Error("unsorted") if depths decrease and Error("invalid_alpha") for an
/// alpha outside [0,1].
Composite composite_pixel(std::span<const Contribution> contributions);

struct RenderMaps {
  ImageBuffer color;   // 3 channels
  ImageBuffer normal;  // 3 channels, world space, unit or 0
  ImageBuffer depth;   // 1 channel, camera-space z, 0 where undefined
  /// Set when no primitive reaches the image.
  bool empty_warning = false;
};

/// Splats sorted by center depth and composited front to back. Depth is the
/// alpha-weighted mean z and normals are renormalized, both only where the
/// accumulated alpha exceeds kCoverageFloor.
RenderMaps render_maps(std::span<const GaussianPrimitive> primitives, const CameraView& view,
                       const PipelineConfig& config);

}  // namespace bframe
