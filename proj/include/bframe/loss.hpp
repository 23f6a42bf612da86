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

#include "bframe/edge_mask.hpp"
#include "bframe/scene.hpp"

#include <iosfwd>

namespace bframe {

struct LossReport {
  double l1_refined = 0.0;
  double ssim_refined = 0.0;
  double normal_refined = 0.0;
  double total = 0.0;
  double mask_coverage = 0.0;
};

/// Per-pixel SSIM (mean over channels) with an 11x11 Gaussian window of
/// sigma 1.5, C1 = 0.01^2, C2 = 0.03^2. Near the border the window is cut
/// to the image and renormalized. With `weights` (1 channel) every window
/// sample is additionally weighted by it, so zero-weight pixels never
/// influence the map.
ImageBuffer ssim_map(const ImageBuffer& a, const ImageBuffer& b,
                     const ImageBuffer* weights = nullptr);

/// mix * mean|a - b| + (1 - mix) * (1 - mean SSIM).
double baseline_loss(const ImageBuffer& render, const ImageBuffer& gt, double mix);

/// Mask-weighted mean of the per-pixel channel-mean absolute difference.
double masked_l1(const ImageBuffer& render, const ImageBuffer& gt, const EdgeMask& mask,
                 double eps);

/// Mask-weighted mean of 1 - SSIM, with SSIM windows restricted to masked
/// pixels. Equals the plain windowed SSIM loss for an all-ones mask.
double masked_ssim(const ImageBuffer& render, const ImageBuffer& gt, const EdgeMask& mask,
                   double eps);

/// Mask-weighted mean of 1 - clip(n . n_depth, -1, 1). Masked pixels where
/// either normal is exactly zero (undefined) are left out; any other masked
/// normal must have norm in [0.99, 1.01] or Error("non_unit_normal") is
/// thrown.
double masked_normal_loss(const ImageBuffer& rendered_normals, const ImageBuffer& depth_normals,
                          const EdgeMask& mask, double eps);

/// World-space normals from central differences of the back-projected
/// depth map; 0 where the pixel or any of its 4 neighbours is undefined.
ImageBuffer depth_to_normals(const ImageBuffer& depth, const CameraView& view);

LossReport total_loss(const ImageBuffer& render, const ImageBuffer& gt,
                      const ImageBuffer& rendered_normals, const ImageBuffer& depth_normals,
                      const EdgeMask& mask, const PipelineConfig& config);

/// key=value block.
void write_loss_report(std::ostream& out, int view_id, const LossReport& report);

}  // namespace bframe
