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
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

namespace bframe {
namespace {

GaussianPrimitive at(const Vec3& c, std::int64_t id) {
  GaussianPrimitive p;
  p.id = id;
  p.center = c;
  return p;
}

EdgeMask full_mask(int w, int h, float v = 1.0f) { return {0, ImageBuffer(w, h, 1, v), 0.5}; }

TEST(ProjectPoint, PrincipalPointAndCulling) {
  const auto v = oracle::make_camera(100, 50, 50, 101, 101);
  const auto p = project_point({0, 0, 2}, v);
  ASSERT_TRUE(p);
  EXPECT_EQ(*p, Vec2(50, 50));
  EXPECT_FALSE(project_point({0, 0, -2}, v));
  EXPECT_FALSE(project_point({10, 0, 2}, v));
}

TEST(ProjectPoint, MatchesHomogeneousMultiply) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const auto v = oracle::make_camera(80, 40, 30, 81, 61, oracle::random_rotation(rng),
                                       Vec3(0, 0, 3));
    const Vec3 x(u(rng), u(rng), u(rng));
    Mat34 rt;
    rt << v.rotation, v.translation;
    const Vec3 h = v.intrinsics * rt * x.homogeneous();
    const Vec2 expect(h.x() / h.z(), h.y() / h.z());
    const auto got = project_point(x, v);
    const bool inside = h.z() > 0 && expect.x() >= 0 && expect.y() >= 0 && expect.x() <= 80 &&
                        expect.y() <= 60;
    ASSERT_EQ(got.has_value(), inside);
    if (got) EXPECT_LT((*got - expect).norm(), 1e-9);
  }
}

TEST(EdgeVisibility, HitMissAndOcclusion) {
  const auto v = oracle::make_camera(100, 50, 50, 101, 101);
  ImageBuffer depth(101, 101, 1, 4.0f);
  EdgeMask mask = full_mask(101, 101, 0.0f);
  mask.mask.at(50, 50) = 1.0f;
  const PipelineConfig config;
  EXPECT_EQ(edge_visibility(at({0, 0, 4}, 0), v, mask, depth, config), 1);
  // Off the mask.
  EXPECT_EQ(edge_visibility(at({0.4, 0, 4}, 0), v, mask, depth, config), 0);
  // Behind a nearer wall at depth 2.
  ImageBuffer wall(101, 101, 1, 2.0f);
  EXPECT_EQ(edge_visibility(at({0, 0, 4}, 0), v, mask, wall, config), 0);
  // Nearest-pixel rounding: 50.4 reads pixel 50.
  EXPECT_EQ(edge_visibility(at({0.004 * 4, 0, 4}, 0), v, mask, depth, config), 1);
}

TEST(ScoreAll, ExtremesAndCountMismatch) {
  std::vector<CameraView> views;
  std::vector<EdgeMask> masks;
  std::vector<ImageBuffer> depths;
  for (int j = 0; j < 4; ++j) {
    views.push_back(oracle::make_camera(100, 50, 50, 101, 101, Mat3::Identity(), Vec3::Zero(), j));
    masks.push_back(full_mask(101, 101));
    depths.emplace_back(101, 101, 1, 4.0f);
  }
  const std::vector<GaussianPrimitive> ps{at({0, 0, 4}, 1), at({0, 0, -4}, 2)};
  const auto t = score_all(ps, views, masks, depths, PipelineConfig{});
  EXPECT_EQ(t.entries[0].score, 1.0);
  EXPECT_EQ(t.entries[1].score, 0.0);
  EXPECT_EQ(t.view_count, 4);
  masks.pop_back();
  EXPECT_THROW(score_all(ps, views, masks, depths, PipelineConfig{}), Error);
}

class RandomScoring : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    std::bernoulli_distribution b(0.4);
    for (int j = 0; j < 6; ++j) {
      views.push_back(oracle::make_camera(30, 15, 15, 31, 31, oracle::random_rotation(rng),
                                          Vec3(0, 0, 3), j));
      EdgeMask m = full_mask(31, 31, 0.0f);
      for (float& x : m.mask.data) x = b(rng) ? 1.0f : 0.0f;
      masks.push_back(m);
      ImageBuffer d(31, 31, 1);
      for (float& x : d.data) x = static_cast<float>(3.0 + 0.02 * u(rng));
      depths.push_back(d);
    }
    for (int i = 0; i < 10; ++i) ps.push_back(at(Vec3(u(rng), u(rng), u(rng)) * 0.3, 100 + i));
  }
  std::vector<CameraView> views;
  std::vector<EdgeMask> masks;
  std::vector<ImageBuffer> depths;
  std::vector<GaussianPrimitive> ps;
};

TEST_F(RandomScoring, MatchesNaiveDoubleLoop) {
  const PipelineConfig config;
  const auto t = score_all(ps, views, masks, depths, config);
  ASSERT_EQ(t.entries.size(), ps.size());
  int total = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    int hits = 0;
    for (std::size_t j = 0; j < views.size(); ++j) {
      const auto& v = views[j];
      Mat34 rt;
      rt << v.rotation, v.translation;
      const Vec3 h = v.intrinsics * rt * ps[i].center.homogeneous();
      if (h.z() <= 0) continue;
      const double x = h.x() / h.z(), y = h.y() / h.z();
      if (x < 0 || y < 0 || x > 30 || y > 30) continue;
      if (masks[j].mask.at(int(std::floor(x + 0.5)), int(std::floor(y + 0.5))) == 0) continue;
      const int x0 = std::min(int(x), 29), y0 = std::min(int(y), 29);
      const double fx = x - x0, fy = y - y0;
      const double d = (1 - fx) * (1 - fy) * depths[j].at(x0, y0) + fx * (1 - fy) * depths[j].at(x0 + 1, y0) +
                       (1 - fx) * fy * depths[j].at(x0, y0 + 1) + fx * fy * depths[j].at(x0 + 1, y0 + 1);
      hits += std::abs(h.z() - d) <= config.depth_eps_abs + config.depth_eps_rel * h.z();
    }
    EXPECT_EQ(t.entries[i].id, ps[i].id);
    EXPECT_EQ(t.entries[i].hit_count(), hits) << i;
    EXPECT_EQ(t.entries[i].score, hits / 6.0);
    total += hits;
  }
  EXPECT_GT(total, 0);
}

TEST_F(RandomScoring, ViewOrderIndependentAndMaskMonotone) {
  const PipelineConfig config;
  const auto base = score_all(ps, views, masks, depths, config);
  std::vector<int> order{5, 2, 0, 4, 1, 3};
  std::vector<CameraView> v2;
  std::vector<EdgeMask> m2;
  std::vector<ImageBuffer> d2;
  for (int j : order) {
    v2.push_back(views[j]);
    m2.push_back(masks[j]);
    d2.push_back(depths[j]);
  }
  const auto perm = score_all(ps, v2, m2, d2, config);
  for (std::size_t i = 0; i < ps.size(); ++i) EXPECT_EQ(perm.entries[i].score, base.entries[i].score);
  auto shrunk = masks;
  std::mt19937_64 rng(8);
  std::bernoulli_distribution drop(0.5);
  for (auto& m : shrunk) {
    for (float& x : m.mask.data) x = drop(rng) ? 0.0f : x;
  }
  const auto less = score_all(ps, views, shrunk, depths, config);
  for (std::size_t i = 0; i < ps.size(); ++i) EXPECT_LE(less.entries[i].score, base.entries[i].score);
}

TEST(Prune, StrictThresholdAndPartition) {
  std::vector<GaussianPrimitive> ps;
  EdgeScoreTable t;
  t.view_count = 10;
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> k(0, 10);
  for (int i = 0; i < 50; ++i) {
    ps.push_back(at(Vec3::Zero(), i * 2));
    t.entries.push_back({i * 2, k(rng) / 10.0, {}});
  }
  t.entries[0].score = 0.1;
  const auto r0 = prune(ps, t, 0.0);
  EXPECT_EQ(r0.kept.size(), ps.size());
  const auto r = prune(ps, t, 0.1);
  std::set<std::int64_t> kept, pruned;
  for (const auto& p : r.kept) kept.insert(p.id);
  for (const auto& p : r.pruned) pruned.insert(p.id);
  EXPECT_EQ(kept.size() + pruned.size(), ps.size());
  EXPECT_TRUE(kept.count(0));
  for (const auto& e : t.entries) EXPECT_EQ(pruned.count(e.id) == 1, e.score < 0.1);
  t.entries[3].id = 999;
  EXPECT_THROW(prune(ps, t, 0.1), Error);
}

}  // namespace
}  // namespace bframe
