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

// Acceptance suite: one PASS/FAIL line per criterion, details indented
// below it. Exit status is 0 only when every checked criterion passes.
//
//   bframe_acceptance [--work DIR]

#include "bframe/delaunay.hpp"
#include "bframe/edge_mask.hpp"
#include "bframe/graphcut.hpp"
#include "bframe/io.hpp"
#include "bframe/loss.hpp"
#include "bframe/mesh_eval.hpp"
#include "bframe/pipeline.hpp"
#include "bframe/pruning.hpp"
#include "bframe/render.hpp"
#include "bframe/synthetic.hpp"
#include "bframe/visibility.hpp"
#include "oracles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace bframe;
using oracle::Vec3;

int failures = 0;

void verdict(int id, bool pass, const std::string& title) {
  if (!pass) ++failures;
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", title.c_str());
}

template <class... A>
void detail(const char* fmt, A... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

double bbox_diagonal(const TriangleMesh& m) {
  Eigen::AlignedBox3d box;
  for (const auto& v : m.vertices) box.extend(v);
  return box.diagonal().norm();
}

SceneSpec house_scene(int resolution) {
  SceneSpec s;
  s.view_count = 40;
  s.resolution = resolution;
  s.density = 200.0;
  s.clutter_fraction = 0.2;
  return s;
}

// ---- independent helpers -------------------------------------------------

std::optional<Vec2> project(const CameraView& v, const Vec3& x, double* z = nullptr) {
  const Vec3 c = v.rotation * x + v.translation;
  if (c.z() <= 0.0) return std::nullopt;
  if (z) *z = c.z();
  const Vec3 h = v.intrinsics * c;
  const Vec2 px(h.x() / h.z(), h.y() / h.z());
  if (px.x() < 0 || px.y() < 0 || px.x() > v.width - 1 || px.y() > v.height - 1) {
    return std::nullopt;
  }
  return px;
}

std::optional<double> bilinear(const ImageBuffer& d, const Vec2& px) {
  const int x0 = static_cast<int>(std::floor(px.x())), y0 = static_cast<int>(std::floor(px.y()));
  const double fx = px.x() - x0, fy = px.y() - y0;
  double acc = 0.0;
  for (int dy = 0; dy < 2; ++dy) {
    for (int dx = 0; dx < 2; ++dx) {
      const double w = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy);
      if (w == 0.0) continue;
      const float s = d.at(x0 + dx, y0 + dy);
      if (s == 0.0f) return std::nullopt;
      acc += w * s;
    }
  }
  return acc;
}

double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// Mesh edges whose two faces bend by more than 10 degrees.
std::vector<std::pair<Vec3, Vec3>> sharp_edges(const TriangleMesh& m) {
  std::map<std::pair<int, int>, std::vector<Vec3>> normals;
  for (const auto& t : m.triangles) {
    const Vec3 n = (m.vertices[t[1]] - m.vertices[t[0]])
                       .cross(m.vertices[t[2]] - m.vertices[t[0]])
                       .normalized();
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      normals[{std::min(a, b), std::max(a, b)}].push_back(n);
    }
  }
  std::vector<std::pair<Vec3, Vec3>> out;
  for (const auto& [e, ns] : normals) {
    if (ns.size() != 2 || ns[0].dot(ns[1]) < std::cos(10.0 * std::numbers::pi / 180.0)) {
      out.push_back({m.vertices[e.first], m.vertices[e.second]});
    }
  }
  return out;
}

std::map<std::pair<int, int>, int> edge_use(const TriangleMesh& m) {
  std::map<std::pair<int, int>, int> use;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      ++use[{std::min(a, b), std::max(a, b)}];
    }
  }
  return use;
}

// ---- criteria -------------------------------------------------------------

struct HouseRun {
  bool ok = false;
  PipelineReport report;
  double diagonal = 0.0;
};

HouseRun run_house(const fs::path& dir, int resolution) {
  HouseRun r;
  try {
    r.report = run_pipeline(house_scene(resolution), dir, PipelineConfig{});
    r.diagonal = bbox_diagonal(io::load_obj(dir / "gt_mesh.obj"));
    r.ok = true;
  } catch (const Error& e) {
    detail("pipeline failed: %s: %s", e.code().c_str(), e.what());
  }
  return r;
}

void criterion2(const HouseRun& h) {
  if (!h.ok) {
    verdict(2, false, "end-to-end synthetic reconstruction");
    return;
  }
  const auto& e = h.report.eval;
  const double limit = 0.02 * h.diagonal;
  const bool faces = e.face_count <= 2000, err = e.rmse <= limit, time = e.wall_time <= 300.0;
  verdict(2, faces && err && time, "end-to-end synthetic reconstruction");
  detail("faces %d (<= 2000: %s), vertices %d", e.face_count, faces ? "yes" : "no",
         e.vertex_count);
  detail("rmse %.3g (<= %.4f: %s)", e.rmse, limit, err ? "yes" : "no");
  detail("wall time %.1f s (<= 300: %s)", e.wall_time, time ? "yes" : "no");
}

void criterion3(const fs::path& dir, bool ok) {
  const std::string title = "pruning efficacy at tau = 0.1";
  if (!ok) {
    verdict(3, false, title);
    return;
  }
  const auto scene = load_manifest(dir / "scene.manifest");
  const int surface = std::stoi(scene.parameters.at("surface_count"));
  const int edge = std::stoi(scene.parameters.at("edge_count"));
  const auto prims = io::load_primitives(dir / "primitives.txt");
  const auto views = io::load_cameras(dir / "cameras.txt");
  const auto gt = io::load_obj(dir / "gt_mesh.obj");
  const PipelineConfig cfg;
  std::vector<ImageBuffer> masks, depths;
  for (std::size_t k = 0; k < views.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "%03zu.sfr", k);
    masks.push_back(io::load_raster(dir / "masks" / name));
    depths.push_back(io::load_raster(dir / "render_depth" / name));
  }
  // Scores recomputed here from the stage's masks and depths.
  std::vector<int> hits(prims.size(), 0);
  for (std::size_t i = 0; i < prims.size(); ++i) {
    for (std::size_t k = 0; k < views.size(); ++k) {
      double z = 0.0;
      const auto px = project(views[k], prims[i].center, &z);
      if (!px) continue;
      const int u = static_cast<int>(std::lround(px->x())), v = static_cast<int>(std::lround(px->y()));
      if (masks[k].at(u, v) < 0.5f) continue;
      const auto d = bilinear(depths[k], *px);
      if (d && std::abs(z - *d) <= cfg.depth_eps_abs + cfg.depth_eps_rel * z) ++hits[i];
    }
  }
  std::map<std::int64_t, double> stage_score;
  {
    std::ifstream in(dir / "scores.txt");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      std::int64_t id = 0;
      double s = 0.0;
      ss >> id >> s;
      stage_score[id] = s;
    }
  }
  const auto creases = sharp_edges(gt);
  int clutter = 0, clutter_pruned = 0, near = 0, near_kept = 0, disagree = 0;
  for (std::size_t i = 0; i < prims.size(); ++i) {
    const double e = static_cast<double>(hits[i]) / static_cast<double>(views.size());
    if (std::abs(e - stage_score[prims[i].id]) > 1e-12) ++disagree;
    const bool kept = e >= 0.1;
    if (static_cast<int>(i) >= surface + edge) {
      ++clutter;
      clutter_pruned += !kept;
      continue;
    }
    double d = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : creases) d = std::min(d, segment_distance(prims[i].center, a, b));
    if (d <= 0.05) {
      ++near;
      near_kept += kept;
    }
  }
  const double pruned = clutter ? static_cast<double>(clutter_pruned) / clutter : 0.0;
  const double kept = near ? static_cast<double>(near_kept) / near : 0.0;
  verdict(3, disagree == 0 && clutter > 0 && pruned >= 0.9 && kept >= 0.95, title);
  detail("clutter pruned %d/%d = %.3f (>= 0.90)", clutter_pruned, clutter, pruned);
  detail("crease primitives kept %d/%d = %.3f (>= 0.95)", near_kept, near, kept);
  detail("stage scores differing from brute force: %d", disagree);
}

void criterion4() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  // (a) Delaunay empty spheres.
  int bad_sets = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 196);
    std::vector<Vec3> pts(n);
    for (auto& p : pts) p = Vec3(u(rng), u(rng), u(rng));
    const TetMesh m = tetrahedralize(pts);
    bool ok = m.size() > 0;
    for (const auto& t : m.tets) {
      if (!ok) break;
      ok = oracle::find_point_inside(pts, pts[t[0]], pts[t[1]], pts[t[2]], pts[t[3]]) < 0;
    }
    bad_sets += !ok;
  }
  // (b) Min cut against every labeling.
  int bad_cuts = 0;
  std::uniform_real_distribution<double> cap(0.0, 3.0);
  std::bernoulli_distribution coin(0.35);
  for (int trial = 0; trial < 100; ++trial) {
    const int nodes = 1 + trial % 12;
    DualGraph g;
    g.tet_count = nodes;
    g.source_cap.assign(nodes, 0.0);
    g.sink_cap.assign(nodes, 0.0);
    for (int a = 0; a < nodes; ++a) {
      for (int b = a + 1; b < nodes; ++b) {
        if (coin(rng)) g.facets.push_back({a, 0, b, cap(rng), cap(rng)});
      }
      if (coin(rng)) g.facets.push_back({a, 0, kOutside, 0.0, cap(rng)});
      if (coin(rng)) g.source_cap[a] = cap(rng);
      if (coin(rng)) g.sink_cap[a] = cap(rng);
    }
    auto value = [&](auto in) {
      double total = 0.0;
      for (const auto& f : g.facets) {
        if (in(f.tet_a) && !in(f.tet_b)) total += f.cap_ba;
        if (!in(f.tet_a) && in(f.tet_b)) total += f.cap_ab;
      }
      for (int t = 0; t < nodes; ++t) total += in(t) ? g.source_cap[t] : g.sink_cap[t];
      return total;
    };
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << nodes); ++mask) {
      best = std::min(best, value([&](int t) { return t != kOutside && ((mask >> t) & 1u); }));
    }
    const auto labels = solve_labels(g);
    const double got = value([&](int t) { return t != kOutside && labels[t]; });
    bad_cuts += std::abs(got - best) > 1e-9 * std::max(1.0, best);
  }
  // (c) RMSE against the exhaustive double loop.
  int bad_rmse = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto random_mesh = [&](int nv, int nf) {
      TriangleMesh m;
      for (int i = 0; i < nv; ++i) m.vertices.push_back(Vec3(u(rng), u(rng), u(rng)));
      std::set<std::array<int, 3>> seen;
      while (static_cast<int>(m.triangles.size()) < nf) {
        std::array<int, 3> t{int(rng() % nv), int(rng() % nv), int(rng() % nv)};
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
        auto key = t;
        std::sort(key.begin(), key.end());
        if (!seen.insert(key).second) continue;
        m.triangles.push_back(t);
      }
      return m;
    };
    const TriangleMesh rec = random_mesh(30, 20), gt = random_mesh(25, 40);
    double sum = 0.0;
    for (const auto& v : rec.vertices) {
      const double d = oracle::nearest_triangle_bruteforce(v, gt);
      sum += d * d;
    }
    const double want = std::sqrt(sum / rec.vertices.size());
    bad_rmse += std::abs(rmse(rec, gt).rmse - want) > 1e-9 * std::max(1.0, want);
  }
  // (d) Compositing against the explicit product sum.
  int bad_stacks = 0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = static_cast<int>(rng() % 40);
    std::vector<Contribution> cs(n);
    std::vector<double> alpha;
    std::vector<Vec3> value;
    double depth = 0.0;
    for (auto& c : cs) {
      depth += unit(rng);
      c = {depth, unit(rng), Vec3(unit(rng), unit(rng), unit(rng))};
      alpha.push_back(c.alpha);
      value.push_back(c.value);
    }
    const auto got = composite_pixel(cs);
    const auto [v, t] = oracle::composite_loop(alpha, value);
    bad_stacks += (got.value - v).cwiseAbs().maxCoeff() > 1e-6 || std::abs(got.transmittance - t) > 1e-6;
  }
  // (e) Sobel against explicit convolution, bit for bit.
  int bad_sobel = 0;
  for (int trial = 0; trial < 20; ++trial) {
    ImageBuffer img(3 + static_cast<int>(rng() % 30), 3 + static_cast<int>(rng() % 30),
                    1 + static_cast<int>(rng() % 3));
    for (auto& x : img.data) x = static_cast<float>(unit(rng));
    bad_sobel += !(gradient_magnitude(img) == oracle::sobel_naive(img));
  }
  verdict(4, bad_sets + bad_cuts + bad_rmse + bad_stacks + bad_sobel == 0, "oracle equivalences");
  detail("(a) Delaunay empty-sphere failures: %d/100 point sets", bad_sets);
  detail("(b) min-cut mismatches vs enumeration: %d/100 graphs", bad_cuts);
  detail("(c) RMSE mismatches vs double loop: %d/50 mesh pairs", bad_rmse);
  detail("(d) compositing mismatches: %d/1000 stacks", bad_stacks);
  detail("(e) Sobel mismatches: %d/20 images", bad_sobel);
}

SceneSpec random_scene(std::mt19937_64& rng, int views, int resolution, double clutter) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SceneSpec s;
  s.building.width = 2.5 + 3.0 * u(rng);
  s.building.depth = 2.0 + 2.5 * u(rng);
  s.building.wall_height = 1.5 + 2.0 * u(rng);
  s.building.roof = u(rng) < 0.7 ? RoofType::kGable : RoofType::kFlat;
  s.building.ridge_height = 0.5 + u(rng);
  s.view_count = views;
  s.resolution = resolution;
  s.density = 120.0;
  s.clutter_fraction = clutter;
  s.seed = rng();
  return s;
}

struct Assets {
  TriangleMesh mesh;
  std::vector<CameraView> views;
  SampledPrimitives sampled;
  std::vector<GroundTruthRender> gt;
};

Assets make_assets(const SceneSpec& s) {
  Assets a;
  BuildingSpec b = s.building;
  b.seed = s.seed;
  a.mesh = generate_building(b);
  TrajectorySpec t = default_trajectory(b, s.view_count, s.resolution);
  t.fov_degrees = s.fov_degrees;
  a.views = spiral_trajectory(t, building_center(b));
  a.sampled = sample_primitives(a.mesh, s.density, s.edge_bias, s.clutter_fraction, s.seed);
  for (const auto& v : a.views) a.gt.push_back(render_ground_truth(a.mesh, v));
  return a;
}

void criterion5() {
  std::mt19937_64 rng(55);
  const PipelineConfig cfg;
  int qualifying = 0, manifold = 0, hull_free = 0, connected_runs = 0;
  for (int run = 0; run < 20; ++run) {
    const Assets a = make_assets(random_scene(rng, 24, 128, 0.2));
    std::vector<EdgeMask> masks;
    std::vector<ImageBuffer> depths;
    for (const auto& v : a.views) {
      const auto maps = render_maps(a.sampled.primitives, v, cfg);
      masks.push_back(mask_from_normals(maps.normal, v.view_id, cfg));
      depths.push_back(maps.depth);
    }
    const auto kept = prune(a.sampled.primitives,
                            score_all(a.sampled.primitives, a.views, masks, depths, cfg),
                            cfg.prune_tau)
                          .kept;
    std::vector<Vec3> pts;
    for (const auto& p : kept) pts.push_back(p.center);
    std::vector<ImageBuffer> gt_depth;
    for (const auto& g : a.gt) gt_depth.push_back(g.depth);
    const auto records = validate_visibility(pts, a.views, gt_depth, cfg);
    const TetMesh tets = tetrahedralize(pts);
    DualGraph g = accumulate_ray_costs(tets, records, a.views, cfg);
    add_geometric_costs(g, geometric_costs(tets), cfg.graphcut_beta);
    LabeledTetMesh lab = solve_mincut(tets, g);
    make_manifold(lab);

    // Condition: inside cells facet-connected (and whether they avoid the hull).
    int inside = 0, reached = 0;
    bool touches_hull = false;
    std::vector<char> seen(tets.size(), 0);
    std::vector<int> stack;
    for (int t = 0; t < tets.size(); ++t) {
      if (!lab.inside[t]) continue;
      ++inside;
      for (int n : tets.neighbors[t]) touches_hull |= n == kOutside;
      if (stack.empty() && reached == 0) {
        seen[t] = 1;
        stack.push_back(t);
        while (!stack.empty()) {
          const int c = stack.back();
          stack.pop_back();
          ++reached;
          for (int n : tets.neighbors[c]) {
            if (n != kOutside && lab.inside[n] && !seen[n]) {
              seen[n] = 1;
              stack.push_back(n);
            }
          }
        }
      }
    }
    const bool connected = inside > 0 && reached == inside;
    const TriangleMesh surface = extract_surface(lab);
    bool closed = !surface.triangles.empty();
    for (const auto& [e, n] : edge_use(surface)) closed &= n == 2;
    connected_runs += connected;
    hull_free += connected && !touches_hull;
    // Hull facets of inside cells are part of the surface, so the check is
    // applied to every connected labeling, hull contact or not.
    if (connected) {
      ++qualifying;
      manifold += closed;
    }
  }
  verdict(5, qualifying > 0 && manifold == qualifying, "closed 2-manifold surfaces");
  detail("runs with a connected inside set: %d/20 (hull-free: %d)", connected_runs, hull_free);
  detail("closed 2-manifold among them: %d/%d", manifold, qualifying);
}

void criterion6() {
  std::mt19937_64 rng(66);
  int nested_scenes = 0, strict_scenes = 0;
  for (int scene = 0; scene < 10; ++scene) {
    const Assets a = make_assets(random_scene(rng, 12, 128, 0.0));
    std::normal_distribution<double> noise(0.0, 0.03);
    std::vector<Vec3> pts;
    for (const auto& p : a.sampled.primitives) {
      pts.push_back(p.center + Vec3(noise(rng), noise(rng), noise(rng)));
    }
    std::vector<ImageBuffer> depth;
    for (const auto& g : a.gt) depth.push_back(g.depth);
    std::vector<std::vector<std::set<int>>> sets;
    for (double eps : {0.001, 0.01, 0.1}) {
      PipelineConfig cfg;
      cfg.depth_eps_abs = eps;
      std::vector<std::set<int>> s;
      for (const auto& r : validate_visibility(pts, a.views, depth, cfg)) {
        std::set<int> ids;
        for (const auto& o : r.visible_views) ids.insert(o.view_id);
        s.push_back(ids);
      }
      sets.push_back(std::move(s));
    }
    bool nested = true, strict01 = false, strict12 = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      nested &= std::includes(sets[1][i].begin(), sets[1][i].end(), sets[0][i].begin(), sets[0][i].end());
      nested &= std::includes(sets[2][i].begin(), sets[2][i].end(), sets[1][i].begin(), sets[1][i].end());
      strict01 |= sets[1][i].size() > sets[0][i].size();
      strict12 |= sets[2][i].size() > sets[1][i].size();
    }
    nested_scenes += nested;
    strict_scenes += nested && strict01 && strict12;
  }
  verdict(6, nested_scenes == 10 && strict_scenes == 10, "depth tolerance monotonicity");
  detail("nested visible-view sets: %d/10 scenes; strict at both steps: %d/10", nested_scenes,
         strict_scenes);
}

void criterion7() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const PipelineConfig cfg;
  const int w = 32, h = 24;
  auto random_image = [&](int c) {
    ImageBuffer img(w, h, c);
    for (auto& x : img.data) x = static_cast<float>(unit(rng));
    return img;
  };
  auto random_normals = [&] {
    ImageBuffer n(w, h, 3);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const Vec3 v = oracle::random_unit(rng);
        for (int c = 0; c < 3; ++c) n.at(x, y, c) = static_cast<float>(v[c]);
      }
    }
    return n;
  };
  EdgeMask mask;
  mask.mask = ImageBuffer(w, h, 1);
  for (auto& x : mask.mask.data) x = unit(rng) < 0.3 ? 1.0f : 0.0f;

  const ImageBuffer img = random_image(3), normals = random_normals();
  const LossReport perfect = total_loss(img, img, normals, normals, mask, cfg);
  const bool zero = perfect.total == 0.0;

  const ImageBuffer render = random_image(3), gt = random_image(3);
  const ImageBuffer rn = random_normals(), dn = random_normals();
  const double eps = cfg.loss_epsilon;
  const double l1 = masked_l1(render, gt, mask, eps), ss = masked_ssim(render, gt, mask, eps),
               nl = masked_normal_loss(rn, dn, mask, eps);
  int changed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    ImageBuffer r2 = render, g2 = gt, rn2 = rn, dn2 = dn;
    const ImageBuffer fr = random_image(3), fg = random_image(3);
    const ImageBuffer fn = random_normals(), fd = random_normals();
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (mask.mask.at(x, y) != 0.0f) continue;
        for (int c = 0; c < 3; ++c) {
          r2.at(x, y, c) = fr.at(x, y, c);
          g2.at(x, y, c) = fg.at(x, y, c);
          rn2.at(x, y, c) = fn.at(x, y, c);
          dn2.at(x, y, c) = fd.at(x, y, c);
        }
      }
    }
    changed += masked_l1(r2, g2, mask, eps) != l1 || masked_ssim(r2, g2, mask, eps) != ss ||
               masked_normal_loss(rn2, dn2, mask, eps) != nl;
  }
  verdict(7, zero && changed == 0, "loss sanity");
  detail("total loss on a perfect render: %.17g", perfect.total);
  detail("fuzz trials changing a masked loss: %d/100", changed);
}

void criterion8() {
  std::mt19937_64 rng(88);
  const std::vector<double> thresholds{0.1, 0.3, 0.5, 0.7};
  int monotone = 0;
  long mask_pixels = 0, contained = 0;
  for (int map = 0; map < 10; ++map) {
    SceneSpec s = random_scene(rng, 10, 256, 0.0);
    BuildingSpec b = s.building;
    const TriangleMesh mesh = generate_building(b);
    const auto views = spiral_trajectory(default_trajectory(b, 10, 256), building_center(b));
    const CameraView& view = views[rng() % views.size()];
    const auto gt = render_ground_truth(mesh, view);

    std::vector<long> counts;
    EdgeMask at_half;
    for (double t : thresholds) {
      PipelineConfig cfg;
      cfg.edge_threshold = t;
      const EdgeMask m = mask_from_normals(gt.normal, view.view_id, cfg);
      long n = 0;
      for (float x : m.mask.data) n += x != 0.0f;
      counts.push_back(n);
      if (t == 0.5) at_half = m;
    }
    bool mono = true;
    for (std::size_t k = 1; k < counts.size(); ++k) mono &= counts[k] <= counts[k - 1];
    monotone += mono;

    // Visible crease samples, rasterized and dilated by one pixel.
    ImageBuffer band(view.width, view.height, 1);
    for (const auto& [a, b2] : sharp_edges(mesh)) {
      const int steps = 4 * view.width;
      for (int k = 0; k <= steps; ++k) {
        const Vec3 x = a + (b2 - a) * (static_cast<double>(k) / steps);
        double z = 0.0;
        const auto px = project(view, x, &z);
        if (!px) continue;
        const int u = static_cast<int>(std::lround(px->x())), v = static_cast<int>(std::lround(px->y()));
        bool visible = false;
        for (int dy = -1; dy <= 1 && !visible; ++dy) {
          for (int dx = -1; dx <= 1 && !visible; ++dx) {
            const int uu = u + dx, vv = v + dy;
            if (uu < 0 || vv < 0 || uu >= view.width || vv >= view.height) continue;
            const float d = gt.depth.at(uu, vv);
            visible = d == 0.0f || d >= z - (0.05 + 0.01 * z);
          }
        }
        if (!visible) continue;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int uu = u + dx, vv = v + dy;
            if (uu >= 0 && vv >= 0 && uu < view.width && vv < view.height) band.at(uu, vv) = 1.0f;
          }
        }
      }
    }
    for (int y = 0; y < view.height; ++y) {
      for (int x = 0; x < view.width; ++x) {
        if (at_half.mask.at(x, y) == 0.0f) continue;
        ++mask_pixels;
        contained += band.at(x, y) != 0.0f;
      }
    }
  }
  const double frac = mask_pixels ? static_cast<double>(contained) / mask_pixels : 0.0;
  verdict(8, monotone == 10 && mask_pixels > 0 && frac >= 0.95, "edge threshold behaviour");
  detail("mask count non-increasing over T in {0.1,0.3,0.5,0.7}: %d/10 maps", monotone);
  detail("T = 0.5 mask pixels within 1 px of a visible crease: %ld/%ld = %.3f (>= 0.95)",
         contained, mask_pixels, frac);
}

void criterion9(const HouseRun& hi, const HouseRun& lo) {
  const std::string title = "resolution robustness 128 vs 256";
  if (!hi.ok || !lo.ok) {
    verdict(9, false, title);
    return;
  }
  // Errors below 1e-9 of the diagonal are rounding noise on exact samples;
  // they are floored there so the ratio stays meaningful.
  const double floor = 1e-9 * hi.diagonal;
  const double a = std::max(lo.report.eval.rmse, floor), b = std::max(hi.report.eval.rmse, floor);
  const double ratio = std::max(a / b, b / a);
  verdict(9, ratio <= 2.0, title);
  detail("rmse 128: %.3g, rmse 256: %.3g, ratio %.3g (<= 2)", lo.report.eval.rmse,
         hi.report.eval.rmse, ratio);
  detail("faces 128: %d, faces 256: %d", lo.report.eval.face_count, hi.report.eval.face_count);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::string work = "acceptance_work";
  app.add_option("--work", work, "scratch directory for pipeline runs");
  CLI11_PARSE(app, argc, argv);

  std::printf("criterion 1: N/A   published benchmark figures need the original data and "
              "GPU training; criteria 2-9 substitute for them\n");
  const HouseRun hi = run_house(fs::path(work) / "house_256", 256);
  criterion2(hi);
  criterion3(fs::path(work) / "house_256", hi.ok);
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  const HouseRun lo = run_house(fs::path(work) / "house_128", 128);
  criterion9(hi, lo);
  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
