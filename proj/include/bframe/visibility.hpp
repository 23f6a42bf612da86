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

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace bframe {

struct ViewObservation {
  int view_id = 0;
  Vec2 pixel = Vec2::Zero();
  double d_exp = 0.0;
  double d_img = 0.0;
};

/// Views in which a point passed the depth-consistency test.
struct VisibilityRecord {
  int point_id = 0;
  std::vector<ViewObservation> visible_views;
};

/// |d_exp - d_img| <= eps_abs + eps_rel * d_exp
inline bool depth_consistent(double d_exp, double d_img, double eps_abs,
                             double eps_rel) {
  return std::abs(d_exp - d_img) <= eps_abs + eps_rel * d_exp;
}

/// Bilinear depth lookup with pixel centers at integer coordinates. Returns
/// nullopt when any texel with non-zero weight holds the sentinel 0.
/// Throws Error("out_of_bounds") outside [0,W-1] x [0,H-1].
std::optional<double> sample_depth_bilinear(const ImageBuffer& depth, const Vec2& pixel);

/// Camera-space z of x. Throws Error("behind_camera") when z <= 0.
double expected_depth(const Vec3& x, const CameraView& view);

/// Projects x and checks it against `depth`; returns the observation when
/// the projection is in bounds, the sample is defined and the depths agree.
std::optional<ViewObservation> check_visibility(const Vec3& x, const CameraView& view,
                                                const ImageBuffer& depth,
                                                double eps_abs, double eps_rel);

/// One record per input point (in input order). `depths[j]` belongs to
/// `views[j]`.
std::vector<VisibilityRecord> validate_visibility(std::span<const Vec3> points,
                                                  std::span<const CameraView> views,
                                                  std::span<const ImageBuffer> depths,
                                                  const PipelineConfig& config);

/// `point_id view_id px py d_exp d_img` per accepted pair.
void write_visibility(std::ostream& out, const std::vector<VisibilityRecord>& records);
std::vector<VisibilityRecord> read_visibility(std::istream& in, int point_count);

}  // namespace bframe
