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

#include "bframe/mesh_eval.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace bframe {
namespace {

TriangleMesh random_mesh(std::mt19937_64& rng, int tris, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  TriangleMesh m;
  for (int t = 0; t < tris; ++t) {
    const int base = static_cast<int>(m.vertices.size());
    const Vec3 c(u(rng), u(rng), u(rng));
    for (int k = 0; k < 3; ++k) m.vertices.push_back(c + 0.3 * Vec3(u(rng), u(rng), u(rng)));
    m.triangles.push_back({base, base + 1, base + 2});
  }
  return m;
}

TEST(PointTriangle, ClosedForms) {
  const Vec3 a(0, 0, 0), b(3, 0, 0), c(0, 3, 0);
  EXPECT_EQ(point_triangle_distance({1, 1, 0}, a, b, c).distance, 0.0);
  const auto r = point_triangle_distance({1, 1, 2.5}, a, b, c);
  EXPECT_NEAR(r.distance, 2.5, 1e-15);
  EXPECT_LT((r.point - Vec3(1, 1, 0)).norm(), 1e-15);
  EXPECT_NEAR(point_triangle_distance({-1, -1, 0}, a, b, c).distance, std::sqrt(2.0), 1e-15);
  EXPECT_THROW(point_triangle_distance({0, 0, 1}, a, b, Vec3(6, 0, 0)), Error);
}

TEST(PointTriangle, MatchesDenseSampling) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 100; ++i) {
    const Vec3 a = 0.5 * Vec3(u(rng), u(rng), u(rng)), b = 0.5 * Vec3(u(rng), u(rng), u(rng)),
               c = 0.5 * Vec3(u(rng), u(rng), u(rng));
    if ((b - a).cross(c - a).norm() < 0.01) continue;
    const Vec3 p = 1.5 * Vec3(u(rng), u(rng), u(rng));
    const auto r = point_triangle_distance(p, a, b, c);
    // 140 steps per side gives about 10^4 barycentric samples.
    const double sampled = oracle::point_triangle_distance_sampled(p, a, b, c, 140);
    EXPECT_LE(r.distance, sampled + 1e-12);
    EXPECT_NEAR(r.distance, sampled, 1e-3);
    EXPECT_NEAR((p - r.point).norm(), r.distance, 1e-12);
    EXPECT_NEAR(r.distance, oracle::nearest_triangle_bruteforce(p, {{a, b, c}, {{0, 1, 2}}}), 1e-9);
  }
}

TEST(Rmse, SelfIsZeroAndOffsetQuad) {
  TriangleMesh quad;
  quad.vertices = {{-10, -10, 0}, {10, -10, 0}, {10, 10, 0}, {-10, 10, 0}};
  quad.triangles = {{0, 1, 2}, {0, 2, 3}};
  EXPECT_EQ(rmse(quad, quad).rmse, 0.0);
  TriangleMesh rec;
  for (int i = 0; i < 25; ++i) rec.vertices.emplace_back(-5 + 0.4 * i, 3 - 0.3 * i, 0.1);
  const auto r = rmse(rec, quad, true);
  EXPECT_NEAR(r.rmse, 0.1, 1e-12);
  EXPECT_EQ(r.vertex_count, 25);
  EXPECT_EQ(r.per_vertex_distances.size(), 25u);
  EXPECT_THROW(rmse(TriangleMesh{}, quad), Error);
  EXPECT_THROW(rmse(quad, TriangleMesh{}), Error);
}

TEST(Rmse, MatchesExhaustiveLoop) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto gt = random_mesh(rng, 1 + trial % 30, 2.0);
    const auto rec = random_mesh(rng, 10, 2.5);
    const auto r = rmse(rec, gt, true);
    double sum = 0.0;
    for (std::size_t i = 0; i < rec.vertices.size(); ++i) {
      const double d = oracle::nearest_triangle_bruteforce(rec.vertices[i], gt);
      EXPECT_NEAR(r.per_vertex_distances[i], d, 1e-9);
      sum += d * d;
    }
    EXPECT_NEAR(r.rmse, std::sqrt(sum / rec.vertices.size()), 1e-9);
    double s2 = 0.0;
    for (double d : r.per_vertex_distances) s2 += d * d;
    EXPECT_NEAR(r.rmse * r.rmse * r.vertex_count, s2, 1e-9 * std::max(1.0, s2));
  }
}

TEST(Rmse, RigidMotionInvariant) {
  std::mt19937_64 rng(3);
  const auto gt = random_mesh(rng, 20, 1.0);
  const auto rec = random_mesh(rng, 15, 1.2);
  const Mat3 r = oracle::random_rotation(rng);
  const Vec3 t(0.3, -2, 5);
  auto move = [&](TriangleMesh m) {
    for (auto& v : m.vertices) v = r * v + t;
    return m;
  };
  const double a = rmse(rec, gt).rmse, b = rmse(move(rec), move(gt)).rmse;
  EXPECT_NEAR(a, b, 1e-9 * a);
}

TEST(Bvh, IntersectMatchesLinearScan) {
  std::mt19937_64 rng(4);
  const auto m = random_mesh(rng, 60, 2.0);
  const TriangleBVH bvh(m);
  for (int i = 0; i < 300; ++i) {
    const Vec3 o = oracle::random_unit(rng) * 5.0;
    const Vec3 d = (oracle::random_unit(rng) * 1.5 - o).normalized();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : m.triangles) {
      const Vec3 &a = m.vertices[t[0]], &b = m.vertices[t[1]], &c = m.vertices[t[2]];
      const Vec3 n = (b - a).cross(c - a);
      const double denom = n.dot(d);
      if (denom == 0.0) continue;
      const double s = n.dot(a - o) / denom;
      if (s <= 0) continue;
      const Vec3 x = o + s * d;
      if ((b - a).cross(x - a).dot(n) >= 0 && (c - b).cross(x - b).dot(n) >= 0 &&
          (a - c).cross(x - c).dot(n) >= 0) {
        best = std::min(best, s);
      }
    }
    const auto hit = bvh.intersect(o, d);
    if (std::isinf(best)) {
      EXPECT_FALSE(hit) << i;
    } else {
      ASSERT_TRUE(hit) << i;
      EXPECT_NEAR(hit->t, best, 1e-9);
    }
  }
}

TEST(Report, KeyValueAndCsv) {
  EvalReport r;
  r.rmse = 0.0375;
  r.face_count = 812;
  r.vertex_count = 410;
  r.wall_time = 1.5;
  std::ostringstream s;
  write_eval_report(s, r);
  EXPECT_EQ(s.str(), "rmse=0.0375\nfaces=812\nvertices=410\ntime_s=1.5\n");
  const auto path = std::filesystem::temp_directory_path() / "bframe_results_test.csv";
  std::filesystem::remove(path);
  append_results_csv(path.string(), "house", "bframe", r);
  append_results_csv(path.string(), "house", "bframe", r);
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "scene,method,faces,vertices,time_s,rmse");
  EXPECT_EQ(lines[1], "house,bframe,812,410,1.5,0.0375");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace bframe
