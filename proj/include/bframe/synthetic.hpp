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
#include <utility>
#include <vector>

namespace bframe {

enum class RoofType { kFlat, kGable };

/// Footprint [-width/2, width/2] x [-depth/2, depth/2] on z = 0; a gable
/// ridge runs along x at wall_height + ridge_height.
struct BuildingSpec {
  double width = 4.0;
  double depth = 3.0;
  double wall_height = 2.5;
  RoofType roof = RoofType::kGable;
  double ridge_height = 1.0;
  std::uint64_t seed = 1;
};

struct TrajectorySpec {
  int view_count = 80;
  double radius = 12.5;
  double elevation_min = 1.25;
  double elevation_max = 5.0;
  double turns = 1.5;
  int resolution = 1000;
  /// Horizontal (= vertical) field of view.
  double fov_degrees = 40.0;
};

/// Throws Error("invalid_spec") on non-positive dimensions.
void validate_building(const BuildingSpec& spec);
void validate_trajectory(const TrajectorySpec& spec);

/// Closed, outward-oriented building mesh: 12 triangles for a flat roof, 16
/// for a gable (2 roof quads, 2 gable triangles, 4 walls, floor).
TriangleMesh generate_building(const BuildingSpec& spec);

/// Center of the building's bounding box.
Vec3 building_center(const BuildingSpec& spec);

/// Trajectory defaults derived from the building: radius 2.5 x footprint
/// diagonal, camera heights from 0.5x to 2x the wall height, 1.5 turns.
TrajectorySpec default_trajectory(const BuildingSpec& building, int view_count, int resolution);

/// Helix around `target`: view k sits at angle 2 pi turns k / n and height
/// linearly interpolated over [elevation_min, elevation_max], looking at
/// the target with square pixels and a centered principal point.
std::vector<CameraView> spiral_trajectory(const TrajectorySpec& spec, const Vec3& target);

struct GroundTruthRender {
  ImageBuffer depth;   // camera-space z of the nearest hit, 0 on a miss
  ImageBuffer normal;  // world-space face normal, 0 on a miss
};

/// Ray casts every pixel center against the mesh.
GroundTruthRender render_ground_truth(const TriangleMesh& mesh, const CameraView& view);

/// Unit face normal from the triangle winding.
Vec3 face_normal(const TriangleMesh& mesh, int triangle);

/// Edges whose two adjacent faces differ in normal by more than
/// `min_angle_degrees` (boundary edges included).
std::vector<std::pair<Vec3, Vec3>> crease_edges(const TriangleMesh& mesh,
                                                double min_angle_degrees = 1.0);

/// Distance from p to the nearest crease segment (infinity when none).
double distance_to_creases(const Vec3& p, const std::vector<std::pair<Vec3, Vec3>>& creases);

/// +1 inside a closed oriented mesh, 0 outside (generalized winding number).
bool inside_mesh(const TriangleMesh& mesh, const Vec3& p);

struct SampledPrimitives {
  /// Surface samples first, then crease-band samples, then clutter.
  std::vector<GaussianPrimitive> primitives;
  int surface_count = 0;
  int edge_count = 0;
  int clutter_count = 0;
};

/// round(density * area) centers spread over the faces in proportion to
/// area, each face filled by a randomly shifted R2 low-discrepancy sequence.
/// Covariance is flattened along the face normal (normal sigma = 10% of the
/// tangent sigma 1 / sqrt(density), which makes the sampled layer
/// effectively opaque), normal = face normal.
/// edge_bias > 0 adds round(density * edge_bias * crease length) samples
/// within edge_bias of the creases. clutter_fraction * (surface + crease
/// samples) isotropic primitives are placed uniformly inside the mesh, at
/// least 3 tangent sigmas away from the surface.
SampledPrimitives sample_primitives(const TriangleMesh& mesh, double density, double edge_bias,
                                    double clutter_fraction, std::uint64_t seed);

}  // namespace bframe
