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

#include "bframe/delaunay.hpp"
#include "bframe/scene.hpp"
#include "bframe/visibility.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

namespace bframe {

/// One facet of the tetrahedralization seen as a pair of directed edges.
/// For hull facets tet_b is kOutside and cap_ba is the terminal edge from
/// the outside node (the source) into tet_a.
struct DualFacet {
  int tet_a = 0;
  int face_a = 0;
  int tet_b = kOutside;
  double cap_ab = 0.0;
  double cap_ba = 0.0;
};

/// Flow network dual to a TetMesh: one node per tetrahedron, the outside
/// node as source and a separate sink.
struct DualGraph {
  int tet_count = 0;
  std::vector<DualFacet> facets;
  /// facet_of[t][i]: index into `facets` of face i of tetrahedron t.
  std::vector<std::array<int, 4>> facet_of;
  std::vector<double> source_cap;
  std::vector<double> sink_cap;
};

struct LabeledTetMesh {
  TetMesh mesh;
  /// 1 = inside, 0 = outside.
  std::vector<char> inside;
};

struct RayStats {
  int rays = 0;
  int facets_crossed = 0;
  /// Rays abandoned after the step limit (degenerate walks).
  int aborted = 0;
};

/// Zero-capacity graph with the facet structure of `tets`.
DualGraph build_dual_graph(const TetMesh& tets);

/// alpha * (1 - exp(-d^2 / (2 sigma^2)))
double visibility_kernel(double d, double sigma, double alpha);

/// Walks every accepted (point, view) segment from the point towards the
/// camera center. Each crossed facet adds visibility_kernel(d) to the edge
/// directed from the camera-side tetrahedron to the point-side one (d is the
/// distance from the point along the ray); leaving through the hull adds it
/// to the source edge of that hull facet, and a camera located inside a
/// tetrahedron gives it vis_alpha of source capacity. Every tetrahedron the
/// ray passes through within 3 * vis_sigma behind the point (up to the hull)
/// receives vis_alpha of sink capacity.
///
/// `records[k].point_id` indexes the points `tets` was built from. Throws
/// Error("ray_walk") naming the pair when a point has no incident cell.
DualGraph accumulate_ray_costs(const TetMesh& tets,
                               std::span<const VisibilityRecord> records,
                               std::span<const CameraView> views,
                               const PipelineConfig& config, RayStats* stats = nullptr);

/// 1 - min(cos phi, cos psi), where phi and psi are the signed angles
/// between the segment cc_a -> cc_b and the facet normal oriented a -> b
/// (resp. the reversed segment and the reversed normal). Coincident
/// circumcenters give 0.
double facet_geometric_cost(const Vec3& cc_a, const Vec3& cc_b, const Vec3& normal_ab);

/// Cost per facet of `build_dual_graph(tets)`; 0 for hull facets.
std::vector<double> geometric_costs(const TetMesh& tets);

/// Adds beta * cost to both directions of every interior facet.
void add_geometric_costs(DualGraph& graph, std::span<const double> costs, double beta);

/// Minimum cut labels: a tetrahedron is inside iff it can still reach the
/// sink in the residual network, so unconstrained nodes are outside.
std::vector<char> solve_labels(const DualGraph& graph);

LabeledTetMesh solve_mincut(const TetMesh& tets, const DualGraph& graph);

/// Capacity of the cut induced by `inside` (outside node on the source side).
double cut_value(const DualGraph& graph, std::span<const char> inside);

/// Relabels cells so the interface is an edge-manifold: inside cells outside
/// the largest facet-connected component become outside, and at every edge
/// bordered by more than two interface facets the outside gaps of the cell
/// ring are filled, except the largest one (or those reaching the hull).
/// Repeats until no edge changes or `max_rounds` is hit. Returns the number
/// of relabeled cells.
int make_manifold(LabeledTetMesh& labeled, int max_rounds = 50);

/// Facets between an inside and an outside cell (hull facets of inside
/// cells included), oriented away from the inside cell. Unused vertices are
/// dropped; the remaining ones keep their relative order.
TriangleMesh extract_surface(const LabeledTetMesh& labeled);

/// Removes triangles with an edge longer than factor * median edge length
/// (over distinct edges of the input), then unreferenced vertices.
TriangleMesh postfilter_edges(const TriangleMesh& mesh, double factor);

/// `tetA tetB cap_ab cap_ba` per facet, tetB = -1 on the hull.
void write_dual_graph(std::ostream& out, const DualGraph& graph);

}  // namespace bframe
