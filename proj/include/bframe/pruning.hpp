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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace bframe {

struct EdgeScore {
  std::int64_t id = 0;
  double score = 0.0;
  /// (view_id, v_ij) for every view, in view order.
  std::vector<std::pair<int, int>> hits;

  int hit_count() const {
    int n = 0;
    for (const auto& h : hits) n += h.second;
    return n;
  }
};

/// One entry per primitive, in input order.
struct EdgeScoreTable {
  std::vector<EdgeScore> entries;
  int view_count = 0;
};

struct PruneResult {
  std::vector<GaussianPrimitive> kept;
  std::vector<GaussianPrimitive> pruned;
};

/// Pixel coordinates of x, or nullopt behind the camera or outside
/// [0,W-1] x [0,H-1].
std::optional<Vec2> project_point(const Vec3& x, const CameraView& view);

/// 1 iff the center projects into the image, the nearest mask pixel is set
/// and the depth-consistency test passes against `depth` at the projection.
int edge_visibility(const GaussianPrimitive& primitive, const CameraView& view,
                    const EdgeMask& mask, const ImageBuffer& depth,
                    const PipelineConfig& config);

/// e_i = (sum_j v_ij) / |views|. Throws Error("count_mismatch") unless there
/// is exactly one mask and one depth per view.
EdgeScoreTable score_all(std::span<const GaussianPrimitive> primitives,
                         std::span<const CameraView> views, std::span<const EdgeMask> masks,
                         std::span<const ImageBuffer> depths, const PipelineConfig& config);

/// pruned = {i : e_i < tau}; order preserved in both halves.
PruneResult prune(std::span<const GaussianPrimitive> primitives, const EdgeScoreTable& table,
                  double tau);

/// `id e_i hit_count view_count` per line.
void write_scores(std::ostream& out, const EdgeScoreTable& table);

}  // namespace bframe
