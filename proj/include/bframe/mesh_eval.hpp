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
#include <string>
#include <vector>

namespace bframe {

struct ClosestPoint {
  double distance = 0.0;
  Vec3 point = Vec3::Zero();
};

/// Exact distance from p to the closed triangle (a, b, c) and the closest
/// point. Throws Error("degenerate_triangle") when the area is <= 1e-12.
ClosestPoint point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Axis-aligned bounding volume hierarchy over a triangle mesh.
class TriangleBVH {
 public:
  explicit TriangleBVH(const TriangleMesh& mesh);

  struct Nearest {
    double distance = 0.0;
    int triangle = -1;
    Vec3 point = Vec3::Zero();
  };
  /// Exact nearest triangle (best-first traversal, exact leaf tests).
  Nearest nearest(const Vec3& p) const;

  struct Hit {
    double t = 0.0;
    int triangle = -1;
  };
  /// Closest intersection with t > 0 along origin + t * dir.
  std::optional<Hit> intersect(const Vec3& origin, const Vec3& dir) const;

  const TriangleMesh& mesh() const { return mesh_; }

 private:
  struct Node {
    Eigen::AlignedBox3d box;
    int left = -1, right = -1;  // children, or -1 for a leaf
    int first = 0, count = 0;   // range in order_ for leaves
  };
  int build(int first, int count);

  TriangleMesh mesh_;
  std::vector<int> order_;
  std::vector<Eigen::AlignedBox3d> tri_box_;
  std::vector<Vec3> tri_center_;
  std::vector<Node> nodes_;
};

struct EvalReport {
  double rmse = 0.0;
  int face_count = 0;
  int vertex_count = 0;
  double wall_time = 0.0;
  std::vector<double> per_vertex_distances;
};

/// One-directional RMSE of reconstructed vertices against the nearest
/// ground-truth triangle. Throws Error("empty_mesh") if either mesh is empty.
EvalReport rmse(const TriangleMesh& rec, const TriangleMesh& gt, bool keep_distances = false);

void write_eval_report(std::ostream& out, const EvalReport& report);

/// Appends `scene,method,faces,vertices,time_s,rmse`, writing the header
/// first when the file is new or empty.
void append_results_csv(const std::string& path, const std::string& scene,
                        const std::string& method, const EvalReport& report);

}  // namespace bframe
