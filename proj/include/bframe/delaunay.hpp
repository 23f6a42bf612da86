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

#include <array>
#include <span>
#include <vector>

namespace bframe {

/// Face opposite local vertex i, listed so its right-hand normal points out
/// of a positively oriented tetrahedron.
inline constexpr int kFaceVertex[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};

inline constexpr int kOutside = -1;

/// Delaunay tetrahedralization. `neighbors[t][i]` is the tetrahedron across
/// the face opposite `tets[t][i]`, or kOutside on the hull.
struct TetMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  std::vector<std::array<int, 4>> neighbors;
  std::vector<Vec3> circumcenters;
  /// canonical[v] == v unless v duplicates an earlier point; duplicates are
  /// not referenced by any tetrahedron.
  std::vector<int> canonical;

  int size() const { return static_cast<int>(tets.size()); }
  /// Outward-oriented vertex triple of face i of tetrahedron t.
  std::array<int, 3> face(int t, int i) const {
    const auto& v = tets[t];
    return {v[kFaceVertex[i][0]], v[kFaceVertex[i][1]], v[kFaceVertex[i][2]]};
  }
  /// Local index in tetrahedron `other` of the face shared with `t`.
  int mirror_index(int t, int i) const;
  /// Tetrahedra incident to every (canonical) vertex.
  std::vector<std::vector<int>> vertex_star() const;
};

/// Incremental Bowyer-Watson insertion inside an enclosing tetrahedron,
/// using exact orientation and insphere predicates with index-based
/// symbolic perturbation. Tetrahedra touching the enclosing vertices are
/// dropped; all remaining ones are Delaunay with respect to every input
/// point. Exact duplicates are collapsed onto their first occurrence.
///
/// Throws Error("insufficient_points") for fewer than 4 distinct points and
/// Error("coplanar_points") when all points lie in one plane.
TetMesh tetrahedralize(std::span<const Vec3> points);

Vec3 circumcenter(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

}  // namespace bframe
