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

#include "bframe/synthetic.hpp"

#include "bframe/mesh_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

namespace bframe {

void validate_building(const BuildingSpec& spec) {
  if (!(spec.width > 0.0 && spec.depth > 0.0 && spec.wall_height > 0.0)) {
    throw Error("invalid_spec", "building dimensions must be positive");
  }
  if (spec.roof == RoofType::kGable && !(spec.ridge_height > 0.0)) {
    throw Error("invalid_spec", "gable ridge height must be positive");
  }
}

void validate_trajectory(const TrajectorySpec& spec) {
  if (spec.view_count < 2) throw Error("invalid_spec", "view_count must be at least 2");
  if (!(spec.radius > 0.0)) throw Error("invalid_spec", "radius must be positive");
  if (spec.resolution < 3) throw Error("invalid_spec", "resolution must be at least 3");
  if (!(spec.fov_degrees > 0.0 && spec.fov_degrees < 180.0)) {
    throw Error("invalid_spec", "fov_degrees must lie in (0, 180)");
  }
}

TriangleMesh generate_building(const BuildingSpec& spec) {
  validate_building(spec);
  const double w = spec.width / 2, d = spec.depth / 2, h = spec.wall_height;
  TriangleMesh m;
  m.vertices = {{-w, -d, 0}, {w, -d, 0}, {w, d, 0}, {-w, d, 0},
                {-w, -d, h}, {w, -d, h}, {w, d, h}, {-w, d, h}};
  m.triangles = {{0, 2, 1}, {0, 3, 2},   // floor
                 {0, 1, 5}, {0, 5, 4},   // y = -d
                 {1, 2, 6}, {1, 6, 5},   // x = +w
                 {2, 3, 7}, {2, 7, 6},   // y = +d
                 {3, 0, 4}, {3, 4, 7}};  // x = -w
  if (spec.roof == RoofType::kFlat) {
    m.triangles.push_back({4, 5, 6});
    m.triangles.push_back({4, 6, 7});
    return m;
  }
  const double r = h + spec.ridge_height;
  m.vertices.emplace_back(-w, 0, r);  // 8
  m.vertices.emplace_back(w, 0, r);   // 9
  m.triangles.push_back({4, 5, 9});
  m.triangles.push_back({4, 9, 8});
  m.triangles.push_back({6, 7, 8});
  m.triangles.push_back({6, 8, 9});
  m.triangles.push_back({5, 6, 9});
  m.triangles.push_back({7, 4, 8});
  return m;
}

Vec3 building_center(const BuildingSpec& spec) {
  const double top = spec.wall_height + (spec.roof == RoofType::kGable ? spec.ridge_height : 0.0);
  return {0.0, 0.0, top / 2.0};
}

TrajectorySpec default_trajectory(const BuildingSpec& building, int view_count, int resolution) {
  TrajectorySpec t;
  t.view_count = view_count;
  t.resolution = resolution;
  t.radius = 2.5 * std::hypot(building.width, building.depth);
  t.elevation_min = 0.5 * building.wall_height;
  t.elevation_max = 2.0 * building.wall_height;
  t.turns = 1.5;
  return t;
}

std::vector<CameraView> spiral_trajectory(const TrajectorySpec& spec, const Vec3& target) {
  validate_trajectory(spec);
  const double half = spec.fov_degrees * std::numbers::pi / 360.0;
  const double focal = 0.5 * spec.resolution / std::tan(half);
  std::vector<CameraView> views;
  views.reserve(spec.view_count);
  for (int k = 0; k < spec.view_count; ++k) {
    const double theta = 2.0 * std::numbers::pi * spec.turns * k / spec.view_count;
    const double f = static_cast<double>(k) / (spec.view_count - 1);
    const double z = spec.elevation_min + f * (spec.elevation_max - spec.elevation_min);
    const Vec3 eye(target.x() + spec.radius * std::cos(theta),
                   target.y() + spec.radius * std::sin(theta), z);
    views.push_back(look_at(eye, target, focal, spec.resolution, spec.resolution, k));
  }
  return views;
}

Vec3 face_normal(const TriangleMesh& mesh, int triangle) {
  const auto& t = mesh.triangles[triangle];
  const Vec3& a = mesh.vertices[t[0]];
  return (mesh.vertices[t[1]] - a).cross(mesh.vertices[t[2]] - a).normalized();
}

GroundTruthRender render_ground_truth(const TriangleMesh& mesh, const CameraView& view) {
  const TriangleBVH bvh(mesh);
  std::vector<Vec3> normals(mesh.triangles.size());
  for (std::size_t t = 0; t < normals.size(); ++t) normals[t] = face_normal(mesh, static_cast<int>(t));
  GroundTruthRender out{ImageBuffer(view.width, view.height, 1),
                        ImageBuffer(view.width, view.height, 3)};
  const Vec3 origin = view.center();
  for (int y = 0; y < view.height; ++y) {
    for (int x = 0; x < view.width; ++x) {
      const Vec3 dir = view.ray_direction(x, y);
      const auto hit = bvh.intersect(origin, dir);
      if (!hit) continue;
      const double z = view.to_camera(origin + hit->t * dir).z();
      if (!(z > 0.0)) continue;
      out.depth.at(x, y) = static_cast<float>(z);
      for (int c = 0; c < 3; ++c) out.normal.at(x, y, c) = static_cast<float>(normals[hit->triangle][c]);
    }
  }
  return out;
}

std::vector<std::pair<Vec3, Vec3>> crease_edges(const TriangleMesh& mesh, double min_angle_degrees) {
  std::map<std::pair<int, int>, std::vector<int>> faces;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      faces[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(t));
    }
  }
  const double cos_limit = std::cos(min_angle_degrees * std::numbers::pi / 180.0);
  std::vector<std::pair<Vec3, Vec3>> out;
  for (const auto& [e, fs] : faces) {
    bool crease = fs.size() != 2;
    if (!crease) crease = face_normal(mesh, fs[0]).dot(face_normal(mesh, fs[1])) < cos_limit;
    if (crease) out.emplace_back(mesh.vertices[e.first], mesh.vertices[e.second]);
  }
  return out;
}

double distance_to_creases(const Vec3& p, const std::vector<std::pair<Vec3, Vec3>>& creases) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : creases) {
    const Vec3 ab = b - a;
    const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    best = std::min(best, (p - (a + t * ab)).norm());
  }
  return best;
}

bool inside_mesh(const TriangleMesh& mesh, const Vec3& p) {
  double total = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec3 a = mesh.vertices[t[0]] - p, b = mesh.vertices[t[1]] - p, c = mesh.vertices[t[2]] - p;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    total += 2.0 * std::atan2(num, den);
  }
  return std::abs(total) > 2.0 * std::numbers::pi;
}

namespace {

Vec3 sample_triangle(const Vec3& a, const Vec3& b, const Vec3& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r1 = std::sqrt(u(rng)), r2 = u(rng);
  return (1.0 - r1) * a + r1 * (1.0 - r2) * b + r1 * r2 * c;
}

GaussianPrimitive surface_primitive(const Vec3& center, const Vec3& n, double sigma_t) {
  GaussianPrimitive p;
  p.center = center;
  const double sigma_n = 0.1 * sigma_t;
  const Mat3 nn = n * n.transpose();
  p.covariance = sigma_t * sigma_t * (Mat3::Identity() - nn) + sigma_n * sigma_n * nn;
  p.opacity = 0.9;
  p.normal = n;
  p.color = 0.5 * (n + Vec3::Ones());
  return p;
}

}  // namespace

SampledPrimitives sample_primitives(const TriangleMesh& mesh, double density, double edge_bias,
                                    double clutter_fraction, std::uint64_t seed) {
  if (!(density > 0.0)) throw Error("invalid_argument", "density must be positive");
  if (edge_bias < 0.0 || clutter_fraction < 0.0) {
    throw Error("invalid_argument", "edge_bias and clutter_fraction must be non-negative");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double sigma_t = 1.0 / std::sqrt(density);

  std::vector<int> faces;
  std::vector<double> cumulative;
  double area = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    area += 0.5 * (mesh.vertices[tri[1]] - mesh.vertices[tri[0]])
                      .cross(mesh.vertices[tri[2]] - mesh.vertices[tri[0]])
                      .norm();
    faces.push_back(static_cast<int>(t));
    cumulative.push_back(area);
  }
  SampledPrimitives out;
  std::int64_t next_id = 0;
  const auto pick_face = [&]() {
    const double r = u(rng) * area;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    return faces[std::min<std::size_t>(it - cumulative.begin(), faces.size() - 1)];
  };
  const auto emit_on = [&](int t, const Vec3& x) {
    GaussianPrimitive p = surface_primitive(x, face_normal(mesh, t), sigma_t);
    p.id = next_id++;
    out.primitives.push_back(p);
  };

  // Each face gets its share of lround(density * area) samples on a
  // randomly shifted R2 sequence, folded into the triangle. The even spacing
  // keeps the splat layer uniformly opaque.
  const double g = 1.32471795724474602596;
  const double a1 = 1.0 / g, a2 = 1.0 / (g * g);
  double before = 0.0;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const long n = std::lround(density * cumulative[f]) - std::lround(density * before);
    before = cumulative[f];
    const auto& tri = mesh.triangles[faces[f]];
    const Vec3 &a = mesh.vertices[tri[0]], &b = mesh.vertices[tri[1]], &c = mesh.vertices[tri[2]];
    const double s1 = u(rng), s2 = u(rng);
    for (long k = 0; k < n; ++k) {
      double x = std::fmod(s1 + static_cast<double>(k) * a1, 1.0);
      double y = std::fmod(s2 + static_cast<double>(k) * a2, 1.0);
      if (x + y > 1.0) {
        x = 1.0 - x;
        y = 1.0 - y;
      }
      emit_on(faces[f], a + x * (b - a) + y * (c - a));
    }
  }
  out.surface_count = static_cast<int>(out.primitives.size());

  if (edge_bias > 0.0 && !faces.empty()) {
    const auto creases = crease_edges(mesh);
    double length = 0.0;
    for (const auto& [a, b] : creases) length += (b - a).norm();
    const long extra = std::lround(density * edge_bias * length);
    // Rejection sampling keeps the samples uniform on the band.
    long made = 0, tries = 0;
    while (made < extra && tries < 1000 * (extra + 1)) {
      ++tries;
      const int t = pick_face();
      const auto& tri = mesh.triangles[t];
      const Vec3 x = sample_triangle(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                     mesh.vertices[tri[2]], rng);
      if (distance_to_creases(x, creases) > edge_bias) continue;
      emit_on(t, x);
      ++made;
    }
  }
  out.edge_count = static_cast<int>(out.primitives.size()) - out.surface_count;

  const long clutter = std::lround(clutter_fraction * static_cast<double>(out.primitives.size()));
  if (clutter > 0) {
    Eigen::AlignedBox3d box;
    for (const auto& v : mesh.vertices) box.extend(v);
    std::normal_distribution<double> g;
    // Centers stay 3 sigma inside the surface so clutter never pokes out.
    const TriangleBVH bvh(mesh);
    long made = 0, tries = 0;
    while (made < clutter && tries < 1000 * (clutter + 1)) {
      ++tries;
      const Vec3 x = box.min() + box.sizes().cwiseProduct(Vec3(u(rng), u(rng), u(rng)));
      if (!inside_mesh(mesh, x) || bvh.nearest(x).distance < 3.0 * sigma_t) continue;
      GaussianPrimitive p;
      p.id = next_id++;
      p.center = x;
      p.covariance = sigma_t * sigma_t * Mat3::Identity();
      p.opacity = 0.9;
      p.normal = Vec3(g(rng), g(rng), g(rng)).normalized();
      p.color = Vec3(u(rng), u(rng), u(rng));
      out.primitives.push_back(p);
      ++made;
    }
  }
  out.clutter_count =
      static_cast<int>(out.primitives.size()) - out.surface_count - out.edge_count;
  return out;
}

}  // namespace bframe
