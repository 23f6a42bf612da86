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

#include "bframe/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>

namespace bframe {

ClosestPoint point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a;
  if (!(0.5 * ab.cross(ac).norm() > 1e-12)) {
    throw Error("degenerate_triangle", "triangle area is below 1e-12");
  }
  // Voronoi-region walk over vertices, edges and the face.
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  auto at = [&](const Vec3& q) { return ClosestPoint{(p - q).norm(), q}; };
  if (d1 <= 0.0 && d2 <= 0.0) return at(a);

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return at(b);

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return at(a + (d1 / (d1 - d3)) * ab);

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return at(c);

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return at(a + (d2 / (d2 - d6)) * ac);

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return at(b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b));
  }
  const double denom = 1.0 / (va + vb + vc);
  return at(a + ab * (vb * denom) + ac * (vc * denom));
}

TriangleBVH::TriangleBVH(const TriangleMesh& mesh) : mesh_(mesh) {
  const int n = static_cast<int>(mesh_.triangles.size());
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0);
  tri_box_.resize(n);
  tri_center_.resize(n);
  for (int i = 0; i < n; ++i) {
    Eigen::AlignedBox3d box;
    for (int v : mesh_.triangles[i]) box.extend(mesh_.vertices[v]);
    tri_box_[i] = box;
    tri_center_[i] = box.center();
  }
  if (n > 0) {
    nodes_.reserve(2 * n);
    build(0, n);
  }
}

int TriangleBVH::build(int first, int count) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Eigen::AlignedBox3d box, centers;
  for (int k = first; k < first + count; ++k) {
    box.extend(tri_box_[order_[k]]);
    centers.extend(tri_center_[order_[k]]);
  }
  nodes_[id].box = box;
  if (count <= 4) {
    nodes_[id].first = first;
    nodes_[id].count = count;
    return id;
  }
  int axis = 0;
  centers.sizes().maxCoeff(&axis);
  const int mid = first + count / 2;
  std::nth_element(order_.begin() + first, order_.begin() + mid, order_.begin() + first + count,
                   [&](int a, int b) { return tri_center_[a][axis] < tri_center_[b][axis]; });
  const int left = build(first, mid - first);
  const int right = build(mid, first + count - mid);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

TriangleBVH::Nearest TriangleBVH::nearest(const Vec3& p) const {
  Nearest best;
  best.distance = std::numeric_limits<double>::infinity();
  if (nodes_.empty()) return best;
  using Entry = std::pair<double, int>;  // squared box distance, node
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  queue.push({nodes_[0].box.squaredExteriorDistance(p), 0});
  double best2 = std::numeric_limits<double>::infinity();
  while (!queue.empty()) {
    const auto [d2, id] = queue.top();
    queue.pop();
    if (d2 > best2) break;
    const Node& node = nodes_[id];
    if (node.left < 0) {
      for (int k = node.first; k < node.first + node.count; ++k) {
        const int t = order_[k];
        const auto& tri = mesh_.triangles[t];
        const ClosestPoint cp = point_triangle_distance(p, mesh_.vertices[tri[0]],
                                                        mesh_.vertices[tri[1]],
                                                        mesh_.vertices[tri[2]]);
        if (cp.distance < best.distance) {
          best = {cp.distance, t, cp.point};
          best2 = cp.distance * cp.distance;
        }
      }
      continue;
    }
    for (int child : {node.left, node.right}) {
      const double c2 = nodes_[child].box.squaredExteriorDistance(p);
      if (c2 <= best2) queue.push({c2, child});
    }
  }
  return best;
}

namespace {

bool ray_box(const Eigen::AlignedBox3d& box, const Vec3& o, const Vec3& inv, double tmax) {
  double t0 = 0.0, t1 = tmax;
  for (int k = 0; k < 3; ++k) {
    double a = (box.min()[k] - o[k]) * inv[k];
    double b = (box.max()[k] - o[k]) * inv[k];
    if (a > b) std::swap(a, b);
    // NaN (0 * inf) means the ray lies in the slab plane; keep the interval.
    if (a > t0) t0 = a;
    if (b < t1) t1 = b;
    if (t0 > t1) return false;
  }
  return true;
}

// Moller-Trumbore with closed edges.
std::optional<double> ray_triangle(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b,
                                   const Vec3& c) {
  const Vec3 e1 = b - a, e2 = c - a;
  const Vec3 pv = d.cross(e2);
  const double det = e1.dot(pv);
  if (det == 0.0) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 tv = o - a;
  const double u = tv.dot(pv) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 qv = tv.cross(e1);
  const double v = d.dot(qv) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(qv) * inv;
  if (!(t > 0.0)) return std::nullopt;
  return t;
}

}  // namespace

std::optional<TriangleBVH::Hit> TriangleBVH::intersect(const Vec3& origin, const Vec3& dir) const {
  if (nodes_.empty()) return std::nullopt;
  const Vec3 inv(1.0 / dir.x(), 1.0 / dir.y(), 1.0 / dir.z());
  std::optional<Hit> best;
  double tmax = std::numeric_limits<double>::infinity();
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    const Node& node = nodes_[id];
    if (!ray_box(node.box, origin, inv, tmax)) continue;
    if (node.left < 0) {
      for (int k = node.first; k < node.first + node.count; ++k) {
        const int t = order_[k];
        const auto& tri = mesh_.triangles[t];
        const auto hit = ray_triangle(origin, dir, mesh_.vertices[tri[0]], mesh_.vertices[tri[1]],
                                      mesh_.vertices[tri[2]]);
        if (hit && (*hit < tmax || (*hit == tmax && t < best->triangle))) {
          tmax = *hit;
          best = Hit{*hit, t};
        }
      }
      continue;
    }
    stack.push_back(node.right);
    stack.push_back(node.left);
  }
  return best;
}

EvalReport rmse(const TriangleMesh& rec, const TriangleMesh& gt, bool keep_distances) {
  const auto start = std::chrono::steady_clock::now();
  if (rec.vertices.empty() || gt.triangles.empty()) {
    throw Error("empty_mesh", "both meshes must be non-empty");
  }
  const TriangleBVH bvh(gt);
  EvalReport r;
  r.face_count = static_cast<int>(rec.triangles.size());
  r.vertex_count = static_cast<int>(rec.vertices.size());
  double sum = 0.0;
  if (keep_distances) r.per_vertex_distances.reserve(rec.vertices.size());
  for (const auto& v : rec.vertices) {
    const double d = bvh.nearest(v).distance;
    sum += d * d;
    if (keep_distances) r.per_vertex_distances.push_back(d);
  }
  r.rmse = std::sqrt(sum / static_cast<double>(rec.vertices.size()));
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void write_eval_report(std::ostream& out, const EvalReport& report) {
  out << "rmse=" << io::format_double(report.rmse) << '\n'
      << "faces=" << report.face_count << '\n'
      << "vertices=" << report.vertex_count << '\n'
      << "time_s=" << io::format_double(report.wall_time) << '\n';
}

void append_results_csv(const std::string& path, const std::string& scene,
                        const std::string& method, const EvalReport& report) {
  bool fresh = true;
  {
    std::ifstream in(path);
    fresh = !in || in.peek() == std::ifstream::traits_type::eof();
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("io", "cannot write " + path);
  if (fresh) out << "scene,method,faces,vertices,time_s,rmse\n";
  out << scene << ',' << method << ',' << report.face_count << ',' << report.vertex_count << ','
      << io::format_double(report.wall_time) << ',' << io::format_double(report.rmse) << '\n';
}

}  // namespace bframe
