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

#include "bframe/pruning.hpp"

#include "bframe/io.hpp"
#include "bframe/visibility.hpp"

#include <cmath>
#include <ostream>

namespace bframe {

std::optional<Vec2> project_point(const Vec3& x, const CameraView& view) {
  const Vec3 xc = view.to_camera(x);
  if (!(xc.z() > 0.0)) return std::nullopt;
  const Vec2 px = view.project_camera(xc);
  if (!view.in_bounds(px)) return std::nullopt;
  return px;
}

int edge_visibility(const GaussianPrimitive& primitive, const CameraView& view,
                    const EdgeMask& mask, const ImageBuffer& depth,
                    const PipelineConfig& config) {
  const auto px = project_point(primitive.center, view);
  if (!px) return 0;
  const int x = static_cast<int>(std::lround(px->x()));
  const int y = static_cast<int>(std::lround(px->y()));
  if (mask.mask.at(x, y) == 0.0f) return 0;
  const auto d_img = sample_depth_bilinear(depth, *px);
  if (!d_img) return 0;
  const double d_exp = view.to_camera(primitive.center).z();
  return depth_consistent(d_exp, *d_img, config.depth_eps_abs, config.depth_eps_rel) ? 1 : 0;
}

EdgeScoreTable score_all(std::span<const GaussianPrimitive> primitives,
                         std::span<const CameraView> views, std::span<const EdgeMask> masks,
                         std::span<const ImageBuffer> depths, const PipelineConfig& config) {
  if (masks.size() != views.size() || depths.size() != views.size()) {
    throw Error("count_mismatch", "one mask and one depth map per view are required");
  }
  for (std::size_t j = 0; j < views.size(); ++j) {
    const auto& v = views[j];
    if (masks[j].mask.width != v.width || masks[j].mask.height != v.height ||
        depths[j].width != v.width || depths[j].height != v.height) {
      throw Error("count_mismatch", "mask or depth map of view " + std::to_string(v.view_id) +
                                        " has the wrong size");
    }
  }
  EdgeScoreTable table;
  table.view_count = static_cast<int>(views.size());
  table.entries.reserve(primitives.size());
  for (const auto& p : primitives) {
    EdgeScore e;
    e.id = p.id;
    e.hits.reserve(views.size());
    for (std::size_t j = 0; j < views.size(); ++j) {
      e.hits.emplace_back(views[j].view_id,
                          edge_visibility(p, views[j], masks[j], depths[j], config));
    }
    e.score = views.empty() ? 0.0 : static_cast<double>(e.hit_count()) / views.size();
    table.entries.push_back(std::move(e));
  }
  return table;
}

PruneResult prune(std::span<const GaussianPrimitive> primitives, const EdgeScoreTable& table,
                  double tau) {
  if (table.entries.size() != primitives.size()) {
    throw Error("count_mismatch", "score table does not match the primitive set");
  }
  PruneResult r;
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    if (table.entries[i].id != primitives[i].id) {
      throw Error("count_mismatch", "score table ids do not match the primitive set");
    }
    (table.entries[i].score < tau ? r.pruned : r.kept).push_back(primitives[i]);
  }
  return r;
}

void write_scores(std::ostream& out, const EdgeScoreTable& table) {
  out << "# id e_i hit_count view_count\n";
  for (const auto& e : table.entries) {
    out << e.id << ' ' << io::format_double(e.score) << ' ' << e.hit_count() << ' '
        << table.view_count << '\n';
  }
}

}  // namespace bframe
