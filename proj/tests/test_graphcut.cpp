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

#include "bframe/delaunay.hpp"
#include "bframe/graphcut.hpp"
#include "bframe/maxflow.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

namespace bframe {
namespace {

TEST(FlowNetwork, TextbookNetwork) {
  // Classic 6-node example with max flow 23.
  FlowNetwork net(6);
  net.add_edge(0, 1, 16);
  net.add_edge(0, 2, 13);
  net.add_edge(1, 2, 10);
  net.add_edge(2, 1, 4);
  net.add_edge(1, 3, 12);
  net.add_edge(3, 2, 9);
  net.add_edge(2, 4, 14);
  net.add_edge(4, 3, 7);
  net.add_edge(3, 5, 20);
  net.add_edge(4, 5, 4);
  EXPECT_DOUBLE_EQ(net.max_flow(0, 5), 23.0);
  const auto side = net.sink_side(5);
  EXPECT_FALSE(side[0]);
  EXPECT_TRUE(side[5]);
}

TEST(FlowNetwork, RejectsNegativeCapacity) {
  FlowNetwork net(2);
  EXPECT_THROW(net.add_edge(0, 1, -1.0), Error);
  EXPECT_THROW(net.add_edge(0, 1, std::nan("")), Error);
}

DualGraph random_graph(std::mt19937_64& rng, int tets) {
  std::uniform_real_distribution<double> cap(0.0, 3.0);
  std::bernoulli_distribution coin(0.35);
  DualGraph g;
  g.tet_count = tets;
  g.source_cap.assign(tets, 0.0);
  g.sink_cap.assign(tets, 0.0);
  for (int a = 0; a < tets; ++a) {
    for (int b = a + 1; b < tets; ++b) {
      if (coin(rng)) g.facets.push_back({a, 0, b, cap(rng), cap(rng)});
    }
    if (coin(rng)) g.facets.push_back({a, 0, kOutside, 0.0, cap(rng)});
    if (coin(rng)) g.source_cap[a] = cap(rng);
    if (coin(rng)) g.sink_cap[a] = cap(rng);
  }
  return g;
}

// Cut value written out independently of the library.
double brute_cut(const DualGraph& g, unsigned mask) {
  auto in = [&](int t) { return t != kOutside && ((mask >> t) & 1u); };
  double total = 0.0;
  for (const auto& f : g.facets) {
    if (in(f.tet_a) && !in(f.tet_b)) total += f.cap_ba;
    if (!in(f.tet_a) && in(f.tet_b)) total += f.cap_ab;
  }
  for (int t = 0; t < g.tet_count; ++t) total += in(t) ? g.source_cap[t] : g.sink_cap[t];
  return total;
}

TEST(MinCut, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int tets = 1 + trial % 11;
    const DualGraph g = random_graph(rng, tets);
    double best = std::numeric_limits<double>::infinity();
    for (unsigned m = 0; m < (1u << tets); ++m) best = std::min(best, brute_cut(g, m));
    const auto labels = solve_labels(g);
    EXPECT_NEAR(cut_value(g, labels), best, 1e-9 * std::max(1.0, best)) << "trial " << trial;
  }
}

TEST(MinCut, ScalingKeepsLabels) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    DualGraph g = random_graph(rng, 10);
    const auto before = solve_labels(g);
    for (auto& f : g.facets) {
      f.cap_ab *= 7.25;
      f.cap_ba *= 7.25;
    }
    for (int t = 0; t < g.tet_count; ++t) {
      g.source_cap[t] *= 7.25;
      g.sink_cap[t] *= 7.25;
    }
    EXPECT_EQ(solve_labels(g), before);
  }
}

std::vector<Vec3> grid_points(int n, double jitter, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) pts.emplace_back(i + u(rng), j + u(rng), k + u(rng));
  return pts;
}

TEST(MinCut, SingleSinkCellIsolated) {
  const auto pts = grid_points(3, 0.1, 3);
  const TetMesh m = tetrahedralize(pts);
  DualGraph g = build_dual_graph(m);
  // Huge capacity out of cell 7 through each of its facets.
  for (int i = 0; i < 4; ++i) {
    DualFacet& f = g.facets[g.facet_of[7][i]];
    (f.tet_a == 7 ? f.cap_ab : f.cap_ba) = 1e6;
  }
  g.sink_cap[7] = 1.0;
  const auto labels = solve_labels(g);
  for (int t = 0; t < m.size(); ++t) EXPECT_EQ(bool(labels[t]), t == 7) << t;
}

TEST(MinCut, NoVisibilityMeansEmptySurface) {
  const auto pts = grid_points(3, 0.1, 4);
  const TetMesh m = tetrahedralize(pts);
  const DualGraph g = build_dual_graph(m);
  const auto labeled = solve_mincut(m, g);
  EXPECT_TRUE(std::none_of(labeled.inside.begin(), labeled.inside.end(),
                           [](char c) { return c != 0; }));
  EXPECT_TRUE(extract_surface(labeled).triangles.empty());
}

TEST(DualGraph, OneEdgePerInteriorFacetOneTerminalPerHullFacet) {
  const auto pts = grid_points(3, 0.2, 8);
  const TetMesh m = tetrahedralize(pts);
  const DualGraph g = build_dual_graph(m);
  int hull = 0, interior = 0;
  for (int t = 0; t < m.size(); ++t)
    for (int i = 0; i < 4; ++i) (m.neighbors[t][i] == kOutside ? hull : interior)++;
  int g_hull = 0, g_int = 0;
  for (const auto& f : g.facets) (f.tet_b == kOutside ? g_hull : g_int)++;
  EXPECT_EQ(g_hull, hull);
  EXPECT_EQ(2 * g_int, interior);
  for (int t = 0; t < m.size(); ++t) {
    for (int i = 0; i < 4; ++i) {
      const DualFacet& f = g.facets[g.facet_of[t][i]];
      EXPECT_TRUE(f.tet_a == t || f.tet_b == t);
    }
  }
}

TEST(VisibilityKernel, LimitsAndValue) {
  EXPECT_EQ(visibility_kernel(0.0, 1.0, 1.0), 0.0);
  EXPECT_NEAR(visibility_kernel(50.0, 1.0, 2.0), 2.0, 1e-15);
  EXPECT_NEAR(visibility_kernel(1.0, 1.0, 1.0), 1.0 - std::exp(-0.5), 1e-15);
}

CameraView camera_at(const Vec3& center, int id) {
  CameraView v;
  v.intrinsics << 100, 0, 50, 0, 100, 50, 0, 0, 1;
  v.rotation = Mat3::Identity();
  v.translation = -center;
  v.width = v.height = 101;
  v.view_id = id;
  return v;
}

TEST(RayCosts, TwoCellComplexHandGeometry) {
  const std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0.25, 0.25, -2},
                                 {0.25, 0.25, 2}};
  const TetMesh m = tetrahedralize(pts);
  ASSERT_EQ(m.size(), 2);
  const Vec3 p = pts[3], c(0.3, 0.2, 10.0);
  std::vector<CameraView> views = {camera_at(c, 4)};
  std::vector<VisibilityRecord> recs(5);
  for (int i = 0; i < 5; ++i) recs[i].point_id = i;
  recs[3].visible_views.push_back({4, Vec2::Zero(), 12.0, 12.0});
  PipelineConfig cfg;
  RayStats stats;
  const DualGraph g = accumulate_ray_costs(m, recs, views, cfg, &stats);
  EXPECT_EQ(stats.rays, 1);
  EXPECT_EQ(stats.aborted, 0);

  // The ray meets z = 0 after 2/12 of its length.
  const double d = (c - p).norm() / 6.0;
  const double expected = 1.0 - std::exp(-d * d / 2.0);
  const int bottom = m.tets[0][0] == 3 || m.tets[0][1] == 3 || m.tets[0][2] == 3 ||
                             m.tets[0][3] == 3
                         ? 0
                         : 1;
  int interior = 0;
  for (const auto& f : g.facets) {
    if (f.tet_b == kOutside) continue;
    ++interior;
    // Capacity flows from the upper (camera side) cell into the lower one.
    const double toward_bottom = f.tet_b == bottom ? f.cap_ab : f.cap_ba;
    const double toward_top = f.tet_b == bottom ? f.cap_ba : f.cap_ab;
    EXPECT_NEAR(toward_bottom, expected, 1e-12);
    EXPECT_EQ(toward_top, 0.0);
  }
  EXPECT_EQ(interior, 1);
  // Exactly one hull facet of the upper cell is crossed; nothing is sunk
  // because the segment behind the point leaves the hull immediately.
  int hull_hits = 0;
  for (const auto& f : g.facets) {
    if (f.tet_b == kOutside && f.cap_ba > 0.0) {
      ++hull_hits;
      EXPECT_NE(f.tet_a, bottom);
    }
  }
  EXPECT_EQ(hull_hits, 1);
  EXPECT_EQ(g.sink_cap[0] + g.sink_cap[1], 0.0);
}

TEST(RayCosts, SinkBehindPointAndSourceAroundCamera) {
  // Big enclosing tetrahedron with interior sample and camera.
  std::vector<Vec3> pts = {{-10, -10, -10}, {10, -10, -10}, {0, 12, -10}, {0, 0, 12},
                           {0.1, 0.2, 0.3}};
  const TetMesh m = tetrahedralize(pts);
  std::vector<CameraView> views = {camera_at(Vec3(0.5, -0.3, 3.0), 0)};
  std::vector<VisibilityRecord> recs(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) recs[i].point_id = static_cast<int>(i);
  recs[4].visible_views.push_back({0, Vec2::Zero(), 1.0, 1.0});
  PipelineConfig cfg;
  cfg.vis_sigma = 0.5;
  const DualGraph g = accumulate_ray_costs(m, recs, views, cfg);
  double src = 0.0;
  for (int t = 0; t < m.size(); ++t) src += g.source_cap[t];
  EXPECT_DOUBLE_EQ(src, 1.0);
  // Cells met by dense samples of the 3 sigma extension each get one vote.
  const Vec3 p = pts[4], dir = (p - views[0].center()).normalized();
  std::set<int> hit;
  for (int k = 1; k <= 2000; ++k) {
    const Vec3 x = p + (1.5 * k / 2000.0) * dir;
    for (int t = 0; t < m.size(); ++t) {
      bool in = true;
      for (int i = 0; i < 4 && in; ++i) {
        const auto f = m.face(t, i);
        const Vec3 &a = m.vertices[f[0]], &b = m.vertices[f[1]], &c = m.vertices[f[2]];
        in = (b - a).cross(c - a).dot(x - a) <= 0.0;
      }
      if (in) hit.insert(t);
    }
  }
  ASSERT_FALSE(hit.empty());
  for (int t = 0; t < m.size(); ++t) EXPECT_DOUBLE_EQ(g.sink_cap[t], hit.count(t) ? 1.0 : 0.0) << t;
}

TEST(RayCosts, RandomScenesStayFiniteAndNonNegative) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> pts;
  for (int i = 0; i < 150; ++i) pts.push_back(oracle::random_unit(rng) * (1.0 + 0.05 * u(rng)));
  const TetMesh m = tetrahedralize(pts);
  std::vector<CameraView> views;
  for (int j = 0; j < 6; ++j) views.push_back(camera_at(4.0 * oracle::random_unit(rng), j));
  std::vector<VisibilityRecord> recs(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    recs[i].point_id = static_cast<int>(i);
    for (const auto& v : views) {
      if ((v.center() - pts[i]).dot(pts[i]) > 0.0)
        recs[i].visible_views.push_back({v.view_id, Vec2::Zero(), 1.0, 1.0});
    }
  }
  PipelineConfig cfg;
  cfg.vis_sigma = 0.2;
  RayStats stats;
  const DualGraph g = accumulate_ray_costs(m, recs, views, cfg, &stats);
  EXPECT_GT(stats.rays, 0);
  EXPECT_EQ(stats.aborted, 0);
  for (const auto& f : g.facets) {
    EXPECT_TRUE(std::isfinite(f.cap_ab) && f.cap_ab >= 0.0);
    EXPECT_TRUE(std::isfinite(f.cap_ba) && f.cap_ba >= 0.0);
  }
  // A sphere seen from outside: the solved interior should be closed.
  auto cost = geometric_costs(m);
  DualGraph full = g;
  add_geometric_costs(full, cost, cfg.graphcut_beta);
  const auto labeled = solve_mincut(m, full);
  const TriangleMesh s = extract_surface(labeled);
  EXPECT_GT(s.triangles.size(), 100u);
}

TEST(GeometricCost, ClosedForms) {
  const Vec3 n(0, 0, 1);
  EXPECT_NEAR(facet_geometric_cost({0, 0, -1}, {0, 0, 2}, n), 0.0, 1e-15);
  const double a = std::numbers::pi / 3.0;
  EXPECT_NEAR(facet_geometric_cost({0, 0, 0}, {std::sin(a), 0, std::cos(a)}, n), 0.5, 1e-12);
  EXPECT_EQ(facet_geometric_cost({1, 2, 3}, {1, 2, 3}, n), 0.0);
  EXPECT_NEAR(facet_geometric_cost({0, 0, 1}, {0, 0, -1}, n), 2.0, 1e-15);
}

TEST(GeometricCost, MatchesAngleOracle) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 200; ++k) {
    const Vec3 a = oracle::random_unit(rng) * 3.0, b = oracle::random_unit(rng) * 2.0;
    const Vec3 n = oracle::random_unit(rng) * 0.7;
    const Vec3 s = b - a;
    const double phi = std::atan2(s.cross(n).norm(), s.dot(n));
    const double psi = std::atan2((-s).cross(-n).norm(), (-s).dot(-n));
    EXPECT_NEAR(facet_geometric_cost(a, b, n), 1.0 - std::min(std::cos(phi), std::cos(psi)),
                1e-12);
  }
}

TEST(GeometricCost, HullFacetsCarryNothing) {
  const auto pts = grid_points(3, 0.2, 9);
  const TetMesh m = tetrahedralize(pts);
  const auto costs = geometric_costs(m);
  DualGraph g = build_dual_graph(m);
  ASSERT_EQ(costs.size(), g.facets.size());
  add_geometric_costs(g, costs, 2.0);
  for (std::size_t k = 0; k < costs.size(); ++k) {
    if (g.facets[k].tet_b == kOutside) {
      EXPECT_EQ(costs[k], 0.0);
      EXPECT_EQ(g.facets[k].cap_ba, 0.0);
    } else {
      EXPECT_EQ(g.facets[k].cap_ab, 2.0 * costs[k]);
      EXPECT_EQ(g.facets[k].cap_ba, 2.0 * costs[k]);
    }
  }
}

using Triple = std::array<int, 3>;

Triple sorted(Triple t) {
  std::sort(t.begin(), t.end());
  return t;
}

TEST(ExtractSurface, SingleInsideCellGivesOutwardFacets) {
  const auto pts = grid_points(3, 0.15, 10);
  const TetMesh m = tetrahedralize(pts);
  LabeledTetMesh lab{m, std::vector<char>(m.size(), 0)};
  lab.inside[5] = 1;
  const TriangleMesh s = extract_surface(lab);
  ASSERT_EQ(s.triangles.size(), 4u);
  ASSERT_EQ(s.vertices.size(), 4u);
  Vec3 centroid = Vec3::Zero();
  for (const auto& v : s.vertices) centroid += v / 4.0;
  for (const auto& t : s.triangles) {
    EXPECT_LT(oracle::orient_exact(s.vertices[t[0]], s.vertices[t[1]], s.vertices[t[2]],
                                   centroid),
              0);
  }
}

TEST(ExtractSurface, MatchesSymmetricDifferenceOracle) {
  std::mt19937_64 rng(12);
  const auto pts = grid_points(4, 0.2, 13);
  const TetMesh m = tetrahedralize(pts);
  for (int trial = 0; trial < 10; ++trial) {
    std::bernoulli_distribution coin(0.4);
    LabeledTetMesh lab{m, std::vector<char>(m.size())};
    for (auto& c : lab.inside) c = coin(rng);
    std::map<Triple, int> count;
    for (int t = 0; t < m.size(); ++t) {
      if (!lab.inside[t]) continue;
      const auto& v = m.tets[t];
      for (int i = 0; i < 4; ++i) {
        Triple f;
        int n = 0;
        for (int k = 0; k < 4; ++k)
          if (k != i) f[n++] = v[k];
        count[sorted(f)]++;
      }
    }
    std::set<Triple> expected;
    for (const auto& [f, c] : count)
      if (c == 1) expected.insert(f);

    const TriangleMesh s = extract_surface(lab);
    std::set<Triple> got;
    for (const auto& t : s.triangles) {
      Triple f;
      for (int k = 0; k < 3; ++k) {
        const auto it = std::find(pts.begin(), pts.end(), s.vertices[t[k]]);
        f[k] = static_cast<int>(it - pts.begin());
      }
      got.insert(sorted(f));
    }
    EXPECT_EQ(got, expected);
    EXPECT_EQ(got.size(), s.triangles.size());
  }
}

TEST(ExtractSurface, VertexStarIsClosedManifold) {
  const auto pts = grid_points(4, 0.2, 14);
  const TetMesh m = tetrahedralize(pts);
  const auto star = m.vertex_star();
  const int center = 1 * 16 + 1 * 4 + 2;  // interior grid point
  LabeledTetMesh lab{m, std::vector<char>(m.size(), 0)};
  for (int t : star[center]) lab.inside[t] = 1;
  const TriangleMesh s = extract_surface(lab);
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : s.triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}]++;
    }
  ASSERT_FALSE(edges.empty());
  for (const auto& [e, c] : edges) EXPECT_EQ(c, 2);
}

std::map<std::pair<int, int>, int> edge_counts(const TriangleMesh& s) {
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : s.triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}]++;
    }
  return edges;
}

bool inside_connected(const LabeledTetMesh& lab) {
  const TetMesh& m = lab.mesh;
  int total = 0, first = -1;
  for (int t = 0; t < m.size(); ++t) {
    if (lab.inside[t]) {
      ++total;
      if (first < 0) first = t;
    }
  }
  if (total == 0) return false;
  std::vector<char> seen(m.size(), 0);
  std::vector<int> stack{first};
  seen[first] = 1;
  int reached = 0;
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    ++reached;
    for (int n : m.neighbors[t]) {
      if (n != kOutside && lab.inside[n] && !seen[n]) {
        seen[n] = 1;
        stack.push_back(n);
      }
    }
  }
  return reached == total;
}

TEST(MakeManifold, TwoStarsTouchingAlongAnEdge) {
  // Stars of two grid neighbours minus the cells they share touch along
  // their common edge only in part of the ring: the repair must close it.
  const auto pts = grid_points(5, 0.2, 21);
  const TetMesh m = tetrahedralize(pts);
  const auto star = m.vertex_star();
  LabeledTetMesh lab{m, std::vector<char>(m.size(), 0)};
  const int a = 2 * 25 + 2 * 5 + 2, b = a + 1;
  for (int t : star[a]) lab.inside[t] = 1;
  for (int t : star[b]) lab.inside[t] = 1;
  // Punch out every second cell around the segment a-b.
  int k = 0;
  for (int t : star[a]) {
    const auto& v = m.tets[t];
    if (std::find(v.begin(), v.end(), b) != v.end() && (k++ % 2)) lab.inside[t] = 0;
  }
  int pinched = 0;
  for (const auto& [e, c] : edge_counts(extract_surface(lab))) pinched += c > 2;
  ASSERT_GT(pinched, 0);
  EXPECT_GT(make_manifold(lab), 0);
  EXPECT_TRUE(inside_connected(lab));
  const auto edges = edge_counts(extract_surface(lab));
  ASSERT_FALSE(edges.empty());
  for (const auto& [e, c] : edges) EXPECT_EQ(c, 2) << e.first << "-" << e.second;
}

TEST(MakeManifold, RandomBlobsBecomeConnectedManifolds) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec3> pts;
    for (int i = 0; i < 300; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
    const TetMesh m = tetrahedralize(pts);
    LabeledTetMesh lab{m, std::vector<char>(m.size(), 0)};
    const Vec3 c(0.5, 0.5, 0.5);
    for (int t = 0; t < m.size(); ++t) {
      // A noisy ball: most central cells inside, with random holes and specks.
      const double r = (m.circumcenters[t] - c).norm();
      lab.inside[t] = (r < 0.35) != (u(rng) < 0.15);
    }
    make_manifold(lab);
    ASSERT_TRUE(inside_connected(lab)) << "trial " << trial;
    for (const auto& [e, n] : edge_counts(extract_surface(lab))) {
      ASSERT_EQ(n, 2) << "trial " << trial;
    }
  }
}

TEST(MakeManifold, ManifoldLabelingUntouched) {
  const auto pts = grid_points(4, 0.2, 14);
  const TetMesh m = tetrahedralize(pts);
  LabeledTetMesh lab{m, std::vector<char>(m.size(), 0)};
  const auto star = m.vertex_star();
  for (int t : star[1 * 16 + 1 * 4 + 2]) lab.inside[t] = 1;
  const auto before = lab.inside;
  EXPECT_EQ(make_manifold(lab), 0);
  EXPECT_EQ(lab.inside, before);
}

TriangleMesh equilateral_strip(int n) {
  TriangleMesh m;
  const double h = std::sqrt(3.0) / 2.0;
  for (int i = 0; i <= n; ++i) {
    m.vertices.emplace_back(i, 0, 0);
    m.vertices.emplace_back(i + 0.5, h, 0);
  }
  for (int i = 0; i < n; ++i) {
    m.triangles.push_back({2 * i, 2 * i + 2, 2 * i + 1});
    m.triangles.push_back({2 * i + 1, 2 * i + 2, 2 * i + 3});
  }
  return m;
}

TEST(PostFilter, UniformMeshUnchanged) {
  const TriangleMesh m = equilateral_strip(10);
  const TriangleMesh out = postfilter_edges(m, 5.0);
  EXPECT_EQ(out.vertices, m.vertices);
  EXPECT_EQ(out.triangles, m.triangles);
}

TEST(PostFilter, LongSliverRemoved) {
  TriangleMesh m = equilateral_strip(10);
  const int far = static_cast<int>(m.vertices.size());
  m.vertices.emplace_back(100.0, 0.0, 0.0);
  m.triangles.push_back({0, 1, far});
  const TriangleMesh out = postfilter_edges(m, 5.0);
  EXPECT_EQ(out.triangles.size(), 20u);
  EXPECT_EQ(out.vertices.size(), m.vertices.size() - 1);
}

TEST(PostFilter, MatchesDirectEdgeScan) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    TriangleMesh m;
    for (int i = 0; i < 30; ++i) m.vertices.emplace_back(u(rng), u(rng), u(rng) * (trial % 3));
    std::uniform_int_distribution<int> pick(0, 29);
    std::set<Triple> used;
    while (m.triangles.size() < 40) {
      Triple t{pick(rng), pick(rng), pick(rng)};
      if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2] || !used.insert(sorted(t)).second) continue;
      m.triangles.push_back(t);
    }
    const double factor = 0.6 + 0.1 * (trial % 5);
    std::set<std::pair<int, int>> edge_set;
    for (const auto& t : m.triangles)
      for (int k = 0; k < 3; ++k)
        edge_set.insert({std::min(t[k], t[(k + 1) % 3]), std::max(t[k], t[(k + 1) % 3])});
    std::vector<double> len;
    for (const auto& [a, b] : edge_set) len.push_back((m.vertices[a] - m.vertices[b]).norm());
    std::sort(len.begin(), len.end());
    const double median = len.size() % 2 ? len[len.size() / 2]
                                         : (len[len.size() / 2 - 1] + len[len.size() / 2]) / 2;
    std::set<std::array<Vec3, 3>, bool (*)(const std::array<Vec3, 3>&,
                                           const std::array<Vec3, 3>&)>
        expected([](const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b) {
          for (int k = 0; k < 3; ++k)
            for (int c = 0; c < 3; ++c)
              if (a[k][c] != b[k][c]) return a[k][c] < b[k][c];
          return false;
        });
    auto got = expected;
    for (const auto& t : m.triangles) {
      bool keep = true;
      for (int k = 0; k < 3; ++k)
        keep = keep && (m.vertices[t[k]] - m.vertices[t[(k + 1) % 3]]).norm() <= factor * median;
      if (keep) expected.insert({m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]});
    }
    const TriangleMesh out = postfilter_edges(m, factor);
    for (const auto& t : out.triangles)
      got.insert({out.vertices[t[0]], out.vertices[t[1]], out.vertices[t[2]]});
    EXPECT_EQ(got.size(), out.triangles.size());
    EXPECT_TRUE(got == expected);
    std::vector<int> refs(out.vertices.size(), 0);
    for (const auto& t : out.triangles)
      for (int v : t) refs[v]++;
    EXPECT_TRUE(std::all_of(refs.begin(), refs.end(), [](int r) { return r > 0; }));
  }
}

}  // namespace
}  // namespace bframe
